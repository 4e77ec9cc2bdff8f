#include "sparsephase/lifted.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "sparsephase/combinatorics.hpp"
#include "sparsephase/errors.hpp"
#include "sparsephase/parallel.hpp"

namespace sparsephase {

namespace {

// Column of vech(X) holding X(i, j), i <= j, in row-major upper-triangle order.
int vech_index(int i, int j, int s) { return i * s - i * (i - 1) / 2 + (j - i); }

struct Accepted {
  RealSignal x;
  double residual;
  bool deficient;
};

double support_residual(const Eigen::MatrixXd& rows, const std::vector<int>& support,
                        const Eigen::VectorXd& values, const std::vector<double>& y) {
  double acc = 0.0;
  for (int n = 0; n < static_cast<int>(rows.rows()); ++n) {
    double ip = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      ip += rows(n, support[i]) * values(static_cast<Eigen::Index>(i));
    }
    const double diff = ip * ip - y[static_cast<std::size_t>(n)];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

RealSignal embed_signed(int m, const std::vector<int>& support, Eigen::VectorXd values) {
  // Sign convention: largest-magnitude entry positive.
  Eigen::Index top = 0;
  values.cwiseAbs().maxCoeff(&top);
  if (values(top) < 0.0) values = -values;
  std::vector<double> vals(values.data(), values.data() + values.size());
  return RealSignal::from_support(m, support, vals);
}

/// All tolerance-feasible sparse solutions supported on `support`, in a
/// deterministic order: the minimum-norm lifted solve first, then (for
/// rank-deficient systems only) sign-pattern least squares.
void solve_support(const Eigen::MatrixXd& rows, const std::vector<int>& support,
                   const std::vector<double>& y, const Eigen::VectorXd& y_vec,
                   const Eigen::VectorXd& sqrt_y, double tol, const RecoveryOptions& opts,
                   std::vector<Accepted>& out, int& skipped_sign_searches) {
  const int n = static_cast<int>(rows.rows());
  const int s = static_cast<int>(support.size());
  const int cols = s * (s + 1) / 2;
  const int m = static_cast<int>(rows.cols());

  Eigen::MatrixXd a(n, cols);
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < s; ++i) {
      const double pi = rows(row, support[static_cast<std::size_t>(i)]);
      for (int j = i; j < s; ++j) {
        const double pj = rows(row, support[static_cast<std::size_t>(j)]);
        a(row, vech_index(i, j, s)) = (i == j) ? pi * pi : 2.0 * pi * pj;
      }
    }
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const bool deficient = cod.rank() < cols;
  const Eigen::VectorXd vech = cod.solve(y_vec);
  const double lifted_residual = (a * vech - y_vec).norm();
  if (lifted_residual > tol) return;  // no symmetric X fits, rank-1 or not

  Eigen::MatrixXd x_mat(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      x_mat(i, j) = x_mat(j, i) = vech(vech_index(i, j, s));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x_mat);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double lambda_top = ev(s - 1);
  const double lambda_second = s >= 2 ? ev(s - 2) : 0.0;
  const double lambda_min = ev(0);
  if (lambda_top > 0.0 && lambda_min >= -1e-8 * lambda_top &&
      lambda_second <= 1e-6 * lambda_top) {
    Eigen::VectorXd xk = std::sqrt(lambda_top) * es.eigenvectors().col(s - 1);
    const double res = support_residual(rows, support, xk, y);
    if (res <= tol) out.push_back({embed_signed(m, support, xk), res, deficient});
  }

  if (!deficient) return;

  // The lifted system does not pin X down; the minimum-norm X can miss
  // rank-1 completions entirely. Enumerate measurement signs and solve the
  // linear system <phi_{n,K}, x> = sign_n * sqrt(y_n) instead; acceptance is
  // still by measurement-space residual, so this adds no false positives.
  std::vector<int> free_signs;  // indices with y_n > 0; the first is pinned +
  for (int i = 0; i < n; ++i) {
    if (y[static_cast<std::size_t>(i)] > 0.0) free_signs.push_back(i);
  }
  const int bits = std::max(0, static_cast<int>(free_signs.size()) - 1);
  if (bits > opts.sign_search_max) {
    ++skipped_sign_searches;
    return;
  }

  Eigen::MatrixXd phi_k(n, s);
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < s; ++i) phi_k(row, i) = rows(row, support[static_cast<std::size_t>(i)]);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> lin(phi_k);
  Eigen::VectorXd b(n);
  for (std::uint64_t pattern = 0; pattern < (1ull << bits); ++pattern) {
    b = sqrt_y;
    for (int bit = 0; bit < bits; ++bit) {
      if (pattern & (1ull << bit)) {
        const int idx = free_signs[static_cast<std::size_t>(bit + 1)];
        b(idx) = -b(idx);
      }
    }
    const Eigen::VectorXd xk = lin.solve(b);
    const double res = support_residual(rows, support, xk, y);
    if (res <= tol) out.push_back({embed_signed(m, support, xk), res, true});
  }
}

}  // namespace

RecoveryReport l0_recover(const MeasurementEnsemble& phi, const IntensityMeasurements& y,
                          int k_max, const RecoveryOptions& opts) {
  if (phi.field() != Field::Real) {
    throw std::invalid_argument("l0_recover: real ensembles only");
  }
  const Eigen::MatrixXd& rows = phi.real_rows();
  const int m = phi.signal_length();
  const int n = phi.count();
  if (y.count() != n) throw std::invalid_argument("l0_recover: measurement count mismatch");
  if (k_max < 0 || k_max > m) throw std::invalid_argument("l0_recover: need 0 <= k_max <= M");
  for (double v : y.values) {
    if (v < 0.0) throw std::invalid_argument("l0_recover: negative intensity");
  }

  const double norm_y = y.l2_norm();
  const double tol = opts.residual_tol.value_or(1e-8 * norm_y);
  Eigen::VectorXd y_vec(n);
  Eigen::VectorXd sqrt_y(n);
  for (int i = 0; i < n; ++i) {
    y_vec(i) = y.values[static_cast<std::size_t>(i)];
    sqrt_y(i) = std::sqrt(y.values[static_cast<std::size_t>(i)]);
  }

  const auto finish = [&](int s, std::vector<Accepted> accepted,
                          int skipped) -> RecoveryReport {
    RecoveryReport report;
    report.sparsity_found = s;
    report.skipped_sign_searches = skipped;
    std::vector<Accepted> unique;
    for (auto& cand : accepted) {
      bool duplicate = false;
      for (const auto& kept : unique) {
        if (equivalent_under_invariances(cand.x, kept.x, InvarianceGroup::SignOnly)) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) unique.push_back(std::move(cand));
    }
    report.solution = unique.front().x;
    report.residual = unique.front().residual;
    for (const auto& kept : unique) report.underdetermined |= kept.deficient;
    for (std::size_t i = 1; i < unique.size(); ++i) {
      report.alternates.push_back(std::move(unique[i].x));
    }
    if (opts.check_certificate) {
      const int order = std::min(2 * s, m);
      report.certificate_checked =
          order == 0 || has_k_complement_property(phi, order, opts.complement).holds;
    }
    return report;
  };

  if (norm_y <= tol) {
    return finish(0, {Accepted{RealSignal::zeros(m), norm_y, false}}, 0);
  }

  int skipped_all_levels = 0;
  for (int s = 1; s <= k_max; ++s) {
    const std::uint64_t total = binomial(m, s);
    if (total > opts.support_cap) {
      throw CapExceededError("l0_recover: C(" + std::to_string(m) + "," + std::to_string(s) +
                             ") supports exceed cap");
    }
    const int workers = opts.workers < 1 ? 1 : opts.workers;
    std::vector<std::vector<Accepted>> found(static_cast<std::size_t>(workers));
    std::vector<int> skipped(static_cast<std::size_t>(workers), 0);
    parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
      std::vector<int> support = combination_from_rank(begin, m, s);
      for (std::uint64_t r = begin; r < end; ++r) {
        if (r > begin) next_combination(support, m);
        solve_support(rows, support, y.values, y_vec, sqrt_y, tol, opts,
                      found[static_cast<std::size_t>(w)], skipped[static_cast<std::size_t>(w)]);
      }
    });
    std::vector<Accepted> accepted;
    int skipped_total = 0;
    for (int w = 0; w < workers; ++w) {
      auto& chunk = found[static_cast<std::size_t>(w)];
      std::move(chunk.begin(), chunk.end(), std::back_inserter(accepted));
      skipped_total += skipped[static_cast<std::size_t>(w)];
    }
    if (!accepted.empty()) return finish(s, std::move(accepted), skipped_total);
    skipped_all_levels += skipped_total;
  }
  std::string what = "l0_recover: no signal of sparsity <= " + std::to_string(k_max) +
                     " matches the measurements within tolerance";
  if (skipped_all_levels > 0) {
    what += " (" + std::to_string(skipped_all_levels) +
            " sign searches skipped; raise sign_search_max to make the scan exhaustive)";
  }
  throw NoSolutionError(what);
}

UniquenessReport verify_uniqueness(const MeasurementEnsemble& phi, const RealSignal& x0,
                                   const RecoveryOptions& opts) {
  if (phi.field() != Field::Real) {
    throw std::invalid_argument("verify_uniqueness: real ensembles only");
  }
  if (x0.size() != phi.signal_length()) {
    throw std::invalid_argument("verify_uniqueness: signal length mismatch");
  }
  UniquenessReport report;
  const int k0 = x0.sparsity();
  if (k0 == 0) {
    report.verdict = UniquenessVerdict::GuaranteedUnique;
    return report;
  }
  report.k_checked = std::min(2 * k0, x0.size());
  if (has_k_complement_property(phi, report.k_checked, opts.complement).holds) {
    report.verdict = UniquenessVerdict::GuaranteedUnique;
    return report;
  }

  const IntensityMeasurements y = intensity_measure(phi, x0);
  RecoveryReport rec = l0_recover(phi, y, k0, opts);
  const bool top_matches =
      rec.sparsity_found == k0 &&
      equivalent_under_invariances(*rec.solution, x0, InvarianceGroup::SignOnly);
  if (top_matches && rec.alternates.empty()) {
    report.verdict = UniquenessVerdict::EmpiricallyUnique;
  } else {
    report.verdict = UniquenessVerdict::Ambiguous;
    if (!top_matches) {
      report.witness = *rec.solution;
    } else {
      report.witness = rec.alternates.front();
    }
  }
  report.recovery = std::move(rec);
  return report;
}

}  // namespace sparsephase
