#include "sparsephase/complement.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sparsephase/combinatorics.hpp"
#include "sparsephase/errors.hpp"
#include "sparsephase/parallel.hpp"

namespace sparsephase {

namespace {

template <typename Mat>
Mat restrict_columns(const Mat& a, const std::vector<int>& cols) {
  Mat out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
  return out;
}

template <typename Mat>
Mat select_rows(const Mat& a, const std::vector<int>& rows) {
  Mat out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
  return out;
}

/// Unit vector u with <row_n, u> = 0 for every row (inner product conjugates
/// the first argument), from the smallest right singular vector of the
/// conjugated row matrix. An empty row set gets e1: everything annihilates it.
template <typename Mat>
Eigen::VectorXcd null_vector(const Mat& rows, Eigen::Index dim) {
  if (rows.rows() == 0) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e(0) = 1.0;
    return e;
  }
  Mat c = rows;
  if constexpr (Eigen::NumTraits<typename Mat::Scalar>::IsComplex) {
    c = rows.conjugate();
  }
  Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeFullV);
  Eigen::VectorXcd u = svd.matrixV().col(dim - 1).template cast<std::complex<double>>();
  // Phase convention: first non-negligible component real positive.
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double mag = std::abs(u(i));
    if (mag > 1e-12) {
      u *= std::conj(u(i)) / mag;
      break;
    }
  }
  return u;
}

template <typename Mat>
bool row_set_spans(const Mat& sub, Eigen::Index k, double sigma_ref, double threshold) {
  if (sub.rows() < k) return false;
  Eigen::JacobiSVD<Mat> svd(sub);
  return svd.singularValues()(k - 1) > threshold * sigma_ref;
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

/// Splits {0..n-1} into S (the bits of mask over positions 1..n-1) and its
/// complement; index 0 always lands in the complement, so each unordered
/// {S, S^c} pair is visited exactly once.
void split_from_mask(std::uint64_t mask, int n, std::vector<int>& s, std::vector<int>& sc) {
  s.clear();
  sc.clear();
  sc.push_back(0);
  for (int i = 1; i < n; ++i) {
    if (mask & (1ull << (i - 1))) {
      s.push_back(i);
    } else {
      sc.push_back(i);
    }
  }
}

template <typename Mat>
ViolationCertificate make_certificate(const Mat& a_restricted, std::vector<int> s,
                                      std::vector<int> kset, const std::vector<int>& sc) {
  ViolationCertificate cert;
  cert.u = null_vector(select_rows(a_restricted, s), a_restricted.cols());
  cert.v = null_vector(select_rows(a_restricted, sc), a_restricted.cols());
  cert.subset = std::move(s);
  cert.coordinates = std::move(kset);
  return cert;
}

/// Shared engine: quantify over coordinate subsets K (all C(d,k) of them in
/// k-mode, just the full set otherwise) and over row splits.
template <typename Mat>
ComplementResult check_engine(const Mat& a_live, int k, bool k_mode,
                              const ComplementOptions& opts) {
  const int n = static_cast<int>(a_live.rows());
  const int d = static_cast<int>(a_live.cols());

  // Counting pre-pass: with fewer than 2k-1 rows, any near-even split leaves
  // both sides short of k rows, so both fail to span no matter the entries.
  if (n < 2 * k - 1) {
    std::vector<int> kset(static_cast<std::size_t>(k));
    std::iota(kset.begin(), kset.end(), 0);
    std::vector<int> s, sc;
    for (int i = 0; i < n; ++i) (i < n / 2 ? s : sc).push_back(i);
    const Mat ak = restrict_columns(a_live, kset);
    return {false, make_certificate(ak, std::move(s), std::move(kset), sc)};
  }

  if (n > opts.max_n) {
    throw CapExceededError("subset enumeration over N=" + std::to_string(n) +
                           " rows exceeds cap --max-n=" + std::to_string(opts.max_n));
  }
  const std::uint64_t num_k = k_mode ? binomial(d, k) : 1;
  if (num_k > opts.max_k_choose) {
    throw CapExceededError("C(" + std::to_string(d) + "," + std::to_string(k) +
                           ") coordinate subsets exceed cap --max-k-choose=" +
                           std::to_string(opts.max_k_choose));
  }

  const std::uint64_t masks = 1ull << (n - 1);
  const std::uint64_t total = num_k * masks;

  struct Hit {
    std::uint64_t flat;
    ViolationCertificate cert;
  };
  const int workers = opts.workers < 1 ? 1 : opts.workers;
  std::vector<std::optional<Hit>> hits(static_cast<std::size_t>(workers));
  std::atomic<bool> found{false};

  parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
    std::uint64_t k_rank = begin / masks;
    std::uint64_t mask = begin % masks;
    std::vector<int> kset = k_mode ? combination_from_rank(k_rank, d, k) : iota_vector(d);
    Mat ak = restrict_columns(a_live, kset);
    double sigma_ref = Eigen::JacobiSVD<Mat>(ak).singularValues()(0);
    std::vector<int> s, sc;
    for (std::uint64_t flat = begin; flat < end; ++flat) {
      if (found.load(std::memory_order_relaxed)) return;
      if (flat > begin && mask == masks) {
        mask = 0;
        ++k_rank;
        next_combination(kset, d);
        ak = restrict_columns(a_live, kset);
        sigma_ref = Eigen::JacobiSVD<Mat>(ak).singularValues()(0);
      }
      split_from_mask(mask, n, s, sc);
      const bool s_spans =
          row_set_spans(select_rows(ak, s), k, sigma_ref, opts.rank_threshold);
      if (!s_spans &&
          !row_set_spans(select_rows(ak, sc), k, sigma_ref, opts.rank_threshold)) {
        hits[static_cast<std::size_t>(w)] = Hit{flat, make_certificate(ak, s, kset, sc)};
        found.store(true, std::memory_order_relaxed);
        return;
      }
      ++mask;
    }
  });

  std::optional<Hit> best;
  for (auto& h : hits) {
    if (h && (!best || h->flat < best->flat)) best = std::move(h);
  }
  if (best) return {false, std::move(best->cert)};
  return {true, std::nullopt};
}

}  // namespace

ComplementResult has_complement_property(const MeasurementEnsemble& phi,
                                         const ComplementOptions& opts) {
  const int d = phi.signal_length();
  if (phi.field() == Field::Real) {
    const Eigen::MatrixXd a = phi.real_rows().leftCols(d);
    return check_engine(a, d, false, opts);
  }
  const Eigen::MatrixXcd a = phi.complex_rows().leftCols(d);
  return check_engine(a, d, false, opts);
}

ComplementResult has_k_complement_property(const MeasurementEnsemble& phi, int k,
                                           const ComplementOptions& opts) {
  const int d = phi.signal_length();
  if (k < 1 || k > d) {
    throw std::invalid_argument("has_k_complement_property: need 1 <= k <= signal length");
  }
  if (phi.field() == Field::Real) {
    const Eigen::MatrixXd a = phi.real_rows().leftCols(d);
    return check_engine(a, k, true, opts);
  }
  const Eigen::MatrixXcd a = phi.complex_rows().leftCols(d);
  return check_engine(a, k, true, opts);
}

std::pair<RealSignal, RealSignal> ambiguity_from_violation(const MeasurementEnsemble& phi,
                                                           const ViolationCertificate& cert) {
  if (phi.field() != Field::Real) {
    throw std::invalid_argument("ambiguity_from_violation: real ensembles only");
  }
  const int m = phi.signal_length();
  const Eigen::Index kk = static_cast<Eigen::Index>(cert.coordinates.size());
  if (kk == 0 || cert.u.size() != kk || cert.v.size() != kk) {
    throw std::invalid_argument("ambiguity_from_violation: malformed certificate");
  }
  for (int c : cert.coordinates) {
    if (c < 0 || c >= m) throw std::invalid_argument("ambiguity_from_violation: K out of range");
  }
  if (cert.u.imag().norm() > 1e-9 * cert.u.norm() ||
      cert.v.imag().norm() > 1e-9 * cert.v.norm()) {
    throw std::invalid_argument("ambiguity_from_violation: complex null vectors on a real ensemble");
  }
  const Eigen::VectorXd u = cert.u.real();
  const Eigen::VectorXd v = cert.v.real();
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw std::invalid_argument("ambiguity_from_violation: zero null vector");
  }
  if (std::fabs(u.dot(v)) >= (1.0 - 1e-10) * nu * nv) {
    throw std::invalid_argument(
        "ambiguity_from_violation: parallel null vectors give a degenerate pair");
  }
  std::vector<double> x1(static_cast<std::size_t>(m), 0.0);
  std::vector<double> x2(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index i = 0; i < kk; ++i) {
    const auto at = static_cast<std::size_t>(cert.coordinates[static_cast<std::size_t>(i)]);
    x1[at] = 0.5 * (u(i) + v(i));
    x2[at] = 0.5 * (u(i) - v(i));
  }
  return {RealSignal(std::move(x1)), RealSignal(std::move(x2))};
}

}  // namespace sparsephase
