#include "sparsephase/fmm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "sparsephase/combinatorics.hpp"
#include "sparsephase/errors.hpp"
#include "sparsephase/parallel.hpp"

namespace sparsephase {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int next_valid_N(int k) {
  if (k < 0) throw std::invalid_argument("next_valid_N: need k >= 0");
  int n = 2 * (k * k - k + 1) + 1;
  while (!is_prime(n)) ++n;
  return n;
}

FmmConditionReport check_fmm_conditions(const RealSignal& x0, int n) {
  FmmConditionReport r;
  r.k = x0.sparsity();
  r.n = n;
  r.n_is_prime = is_prime(n);
  const long long bound = 2ll * (static_cast<long long>(r.k) * r.k - r.k + 1);
  r.bound_ok = n > bound;
  r.collision_free = is_collision_free(x0).collision_free;
  if (r.k == 6) {
    const auto& supp = x0.support();
    bool all_equal = true;
    for (std::size_t i = 1; i < supp.size(); ++i) {
      if (x0[supp[i]] != x0[supp[0]]) {
        all_equal = false;
        break;
      }
    }
    r.k6_case = all_equal ? K6Case::K6AllEqual : K6Case::K6DistinctValues;
  }
  if (!r.n_is_prime) r.reasons.push_back("N is not prime");
  if (!r.bound_ok) {
    r.reasons.push_back("N does not exceed 2(k^2-k+1) = " + std::to_string(bound));
  }
  if (!r.collision_free) r.reasons.push_back("signal is not collision free");
  if (!r.reasons.empty()) {
    r.verdict = FmmVerdict::NotGuaranteed;
  } else if (r.k6_case == K6Case::K6AllEqual) {
    r.verdict = FmmVerdict::UniqueAlmostSurely;
  } else {
    r.verdict = FmmVerdict::Unique;
  }
  return r;
}

PaddedAutocorrArrangement PaddedAutocorrArrangement::from_autocorrelation(
    const Autocorrelation& a) {
  const int m = a.signal_length();
  PaddedAutocorrArrangement out;
  out.q.assign(static_cast<std::size_t>(2 * m), 0.0);
  for (int l = 0; l < m; ++l) out.q[static_cast<std::size_t>(l)] = a.at(l);
  for (int t = 1; t < m; ++t) out.q[static_cast<std::size_t>(m + t)] = a.at(m - t);
  return out;
}

Autocorrelation PaddedAutocorrArrangement::to_autocorrelation() const {
  const int m = signal_length();
  std::vector<double> lags(static_cast<std::size_t>(2 * m - 1), 0.0);
  for (int l = 0; l < m; ++l) {
    lags[static_cast<std::size_t>(m - 1 + l)] = q[static_cast<std::size_t>(l)];
    lags[static_cast<std::size_t>(m - 1 - l)] = q[static_cast<std::size_t>(l)];
  }
  return Autocorrelation(std::move(lags));
}

int PaddedAutocorrArrangement::nonzero_count(double tol) const {
  int count = 0;
  for (double v : q) {
    if (std::fabs(v) > tol) ++count;
  }
  return count;
}

bool PaddedAutocorrArrangement::is_symmetric(double tol) const {
  const int m = signal_length();
  for (int j = 1; j < m; ++j) {
    if (std::fabs(q[static_cast<std::size_t>(j)] - q[static_cast<std::size_t>(2 * m - j)]) > tol) {
      return false;
    }
  }
  return true;
}

namespace {

double q_inf_norm(const std::vector<double>& q) {
  double s = 0.0;
  for (double v : q) s = std::max(s, std::fabs(v));
  return s;
}

struct LevelCandidate {
  PaddedAutocorrArrangement q;
  double residual;
};

/// Scans every support of the given positions at one sparsity level and
/// keeps tolerance-feasible least-squares solutions, in lexicographic order.
std::vector<LevelCandidate> scan_q_level(const Eigen::MatrixXd& b, const Eigen::VectorXd& c,
                                         const std::vector<int>& positions, int s, int l,
                                         double tol, const AutocorrRecoveryOptions& opts) {
  const int p = static_cast<int>(positions.size());
  const std::uint64_t total = binomial(p, s);
  if (total > opts.support_cap) {
    throw CapExceededError("recover_autocorrelation: C(" + std::to_string(p) + "," +
                           std::to_string(s) + ") supports exceed cap");
  }
  const int workers = opts.workers < 1 ? 1 : opts.workers;
  std::vector<std::vector<LevelCandidate>> found(static_cast<std::size_t>(workers));
  parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
    std::vector<int> comb = combination_from_rank(begin, p, s);
    Eigen::MatrixXd bt(b.rows(), s);
    for (std::uint64_t r = begin; r < end; ++r) {
      if (r > begin) next_combination(comb, p);
      for (int i = 0; i < s; ++i) {
        bt.col(i) = b.col(positions[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])]);
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(bt);
      const Eigen::VectorXd qt = cod.solve(c);
      const double res = (bt * qt - c).norm();
      if (res <= tol) {
        PaddedAutocorrArrangement out;
        out.q.assign(static_cast<std::size_t>(l), 0.0);
        for (int i = 0; i < s; ++i) {
          out.q[static_cast<std::size_t>(
              positions[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])])] = qt(i);
        }
        found[static_cast<std::size_t>(w)].push_back({std::move(out), res});
      }
    }
  });
  std::vector<LevelCandidate> merged;
  for (auto& chunk : found) {
    std::move(chunk.begin(), chunk.end(), std::back_inserter(merged));
  }
  return merged;
}

/// Symmetric variant: unknowns are the half-lags c(0..M-1) with c(l) placed
/// at positions l and 2M-l, so the combined column 2*cos(2*pi*l*k_n / 2M) is
/// real and the system shrinks to N real equations. Lag supports are visited
/// in order of the q-sparsity they induce; acceptance still measures the
/// full stacked system so both modes share one feasibility notion.
std::vector<LevelCandidate> scan_q_level_symmetric(const Eigen::MatrixXd& g,
                                                   const Eigen::VectorXd& y_vec,
                                                   const Eigen::MatrixXd& b,
                                                   const Eigen::VectorXd& c, int s, int m,
                                                   double tol,
                                                   const AutocorrRecoveryOptions& opts) {
  const bool with_zero = (s % 2) == 1;
  const int t = with_zero ? (s + 1) / 2 : s / 2;
  const int interior = with_zero ? t - 1 : t;  // lags drawn from {1..M-1}
  if (interior > m - 1) return {};
  const std::uint64_t total = binomial(m - 1, interior);
  if (total > opts.support_cap) {
    throw CapExceededError("recover_autocorrelation: symmetric supports exceed cap");
  }
  std::vector<LevelCandidate> merged;
  std::vector<int> comb = interior > 0 ? first_combination(interior) : std::vector<int>{};
  for (std::uint64_t r = 0; r < total; ++r) {
    if (r > 0) next_combination(comb, m - 1);
    std::vector<int> lags;
    if (with_zero) lags.push_back(0);
    for (int idx : comb) lags.push_back(idx + 1);
    Eigen::MatrixXd gt(g.rows(), static_cast<Eigen::Index>(lags.size()));
    for (std::size_t i = 0; i < lags.size(); ++i) {
      gt.col(static_cast<Eigen::Index>(i)) = g.col(lags[i]);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gt);
    const Eigen::VectorXd ct = cod.solve(y_vec);
    PaddedAutocorrArrangement out;
    out.q.assign(static_cast<std::size_t>(2 * m), 0.0);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * m);
    for (std::size_t i = 0; i < lags.size(); ++i) {
      const int lag = lags[i];
      out.q[static_cast<std::size_t>(lag)] = ct(static_cast<Eigen::Index>(i));
      full(lag) = ct(static_cast<Eigen::Index>(i));
      if (lag > 0) {
        out.q[static_cast<std::size_t>(2 * m - lag)] = ct(static_cast<Eigen::Index>(i));
        full(2 * m - lag) = ct(static_cast<Eigen::Index>(i));
      }
    }
    const double res = (b * full - c).norm();
    if (res <= tol) merged.push_back({std::move(out), res});
  }
  return merged;
}

}  // namespace

AutocorrRecovery recover_autocorrelation(const IntensityMeasurements& y,
                                         const std::vector<int>& freqs, int m, int s_max,
                                         const AutocorrRecoveryOptions& opts) {
  const MeasurementEnsemble phi = MeasurementEnsemble::fourier(m, freqs);
  const int n = phi.count();
  if (y.count() != n) {
    throw std::invalid_argument("recover_autocorrelation: measurement count mismatch");
  }
  if (s_max < 0) throw std::invalid_argument("recover_autocorrelation: need s_max >= 0");
  const int l = 2 * m;

  // <phi_n, q> = y(n) with real q: stack real and imaginary parts.
  const Eigen::MatrixXcd a_conj = phi.complex_rows().conjugate();
  Eigen::MatrixXd b(2 * n, l);
  b.topRows(n) = a_conj.real();
  b.bottomRows(n) = a_conj.imag();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
  Eigen::VectorXd y_vec(n);
  for (int i = 0; i < n; ++i) {
    c(i) = y.values[static_cast<std::size_t>(i)];
    y_vec(i) = y.values[static_cast<std::size_t>(i)];
  }
  const double tol = opts.linear_tol.value_or(1e-8 * y.l2_norm());

  std::vector<int> positions;  // q(M) is pinned to zero and never a support
  for (int j = 0; j < l; ++j) {
    if (j != m) positions.push_back(j);
  }

  Eigen::MatrixXd g;  // symmetric-mode matrix, built on demand
  if (opts.exploit_symmetry) {
    g.resize(n, m);
    for (int row = 0; row < n; ++row) {
      g(row, 0) = 1.0;
      for (int lag = 1; lag < m; ++lag) {
        g(row, lag) = (a_conj(row, lag) + a_conj(row, l - lag)).real();
      }
    }
  }

  for (int s = 0; s <= s_max; ++s) {
    std::vector<LevelCandidate> level;
    if (s == 0) {
      if (c.norm() <= tol) {
        PaddedAutocorrArrangement zero;
        zero.q.assign(static_cast<std::size_t>(l), 0.0);
        level.push_back({std::move(zero), c.norm()});
      }
    } else if (opts.exploit_symmetry) {
      level = scan_q_level_symmetric(g, y_vec, b, c, s, m, tol, opts);
    } else {
      level = scan_q_level(b, c, positions, s, l, tol, opts);
    }
    if (level.empty()) continue;

    // Distinct solutions only: different supports can carry the same vector
    // when least squares zeroes an entry.
    std::vector<LevelCandidate> unique;
    for (auto& cand : level) {
      const double dtol = 1e-9 * std::max(1.0, q_inf_norm(cand.q.q));
      bool dup = false;
      for (const auto& kept : unique) {
        double diff = 0.0;
        for (std::size_t i = 0; i < cand.q.q.size(); ++i) {
          diff = std::max(diff, std::fabs(cand.q.q[i] - kept.q.q[i]));
        }
        if (diff <= dtol) {
          dup = true;
          break;
        }
      }
      if (!dup) unique.push_back(std::move(cand));
    }

    AutocorrRecovery out;
    out.q = std::move(unique.front().q);
    for (std::size_t i = 1; i < unique.size(); ++i) {
      out.alternates.push_back(std::move(unique[i].q));
    }
    out.sparsity_found = s;
    out.unique = out.alternates.empty();
    out.uniqueness_hypothesis_ok = is_prime(n) && 2 * s <= n;
    out.symmetric = out.q.is_symmetric(1e-8 * std::max(1.0, q_inf_norm(out.q.q)));
    return out;
  }
  throw NoSolutionError("recover_autocorrelation: no arrangement of sparsity <= " +
                        std::to_string(s_max) + " satisfies the measurements");
}

namespace {

bool lex_less(const RealSignal& a, const RealSignal& b) {
  return std::lexicographical_compare(a.values().begin(), a.values().end(), b.values().begin(),
                                      b.values().end());
}

/// Deterministic orbit representative that keeps the autocorrelation intact:
/// lexicographically smallest image under sign, mirror, and the non-wrapping
/// circular shifts only (a wrapping shift changes the autocorrelation).
RealSignal autocorr_preserving_canonical(const RealSignal& x) {
  const int m = x.size();
  RealSignal best = x;
  for (int sign : {+1, -1}) {
    for (bool mirror : {false, true}) {
      for (int shift = 0; shift < m; ++shift) {
        const InvarianceAction a{sign, mirror, shift};
        if (!is_non_wrapping(a, x)) continue;
        RealSignal cand = apply(a, x);
        if (lex_less(cand, best)) best = std::move(cand);
      }
    }
  }
  return best;
}

bool autocorr_matches(const RealSignal& x, const Autocorrelation& a, double tol) {
  const Autocorrelation ax = autocorrelation(x);
  for (int lag = 0; lag < a.signal_length(); ++lag) {
    if (std::fabs(ax.at(lag) - a.at(lag)) > tol) return false;
  }
  return true;
}

struct LagEquation {
  int lag;                                // > 0
  std::vector<std::pair<int, int>> pairs;  // (i, j) with i < j and t_j - t_i = lag
};

std::vector<LagEquation> build_lag_equations(const std::vector<int>& t) {
  std::map<int, std::vector<std::pair<int, int>>> by_diff;
  const int k = static_cast<int>(t.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      by_diff[t[static_cast<std::size_t>(j)] - t[static_cast<std::size_t>(i)]].emplace_back(i, j);
    }
  }
  std::vector<LagEquation> eqs;
  eqs.reserve(by_diff.size());
  for (auto& [lag, pairs] : by_diff) eqs.push_back({lag, std::move(pairs)});
  return eqs;
}

/// Closed form for supports whose pairwise differences are all distinct:
/// every lag is one product, so v_j = a(t_j) / v_0 and the energy equation
/// becomes a quadratic in v_0^2. The two roots are the mirror pair.
std::vector<Eigen::VectorXd> sidon_value_solutions(const std::vector<int>& t,
                                                   const Autocorrelation& a) {
  const int k = static_cast<int>(t.size());
  double csum = 0.0;
  for (int j = 1; j < k; ++j) {
    const double alag = a.at(t[static_cast<std::size_t>(j)]);
    csum += alag * alag;
  }
  std::vector<Eigen::VectorXd> out;
  const double a0 = a.at(0);
  double disc = a0 * a0 - 4.0 * csum;
  // A double root (anchor energy equal to the rest) may land slightly
  // negative when a carries solver noise; a clearly negative discriminant
  // still proves the support empty.
  if (disc < -1e-6 * a0 * a0) return out;
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  for (const double w : {0.5 * (a0 + root), 0.5 * (a0 - root)}) {
    if (w <= 0.0) continue;
    Eigen::VectorXd v(k);
    v(0) = std::sqrt(w);
    for (int j = 1; j < k; ++j) v(j) = a.at(t[static_cast<std::size_t>(j)]) / v(0);
    out.push_back(std::move(v));
    if (root == 0.0) break;
  }
  return out;
}

struct BilinearSystem {
  const std::vector<LagEquation>& eqs;
  const Autocorrelation& a;

  void residual(const Eigen::VectorXd& v, Eigen::VectorXd& f) const {
    f(0) = v.squaredNorm() - a.at(0);
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      double s = 0.0;
      for (const auto& [i, j] : eqs[e].pairs) s += v(i) * v(j);
      f(static_cast<Eigen::Index>(e + 1)) = s - a.at(eqs[e].lag);
    }
  }

  void jacobian(const Eigen::VectorXd& v, Eigen::MatrixXd& jac) const {
    jac.setZero();
    jac.row(0) = 2.0 * v.transpose();
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      for (const auto& [i, j] : eqs[e].pairs) {
        jac(static_cast<Eigen::Index>(e + 1), i) += v(j);
        jac(static_cast<Eigen::Index>(e + 1), j) += v(i);
      }
    }
  }
};

/// Levenberg-damped Gauss-Newton on the bilinear lag equations. Returns true
/// when the residual reaches `target`; v holds the final iterate either way.
/// Iterates well past `target` (until progress stops or a floor six orders
/// below it): starts that share a root must land on numerically identical
/// iterates or the orbit dedup downstream would split one solution in two.
bool refine_values(const BilinearSystem& sys, double target, Eigen::VectorXd& v) {
  const int k = static_cast<int>(v.size());
  const int ne = static_cast<int>(sys.eqs.size()) + 1;
  Eigen::VectorXd f(ne), fc(ne);
  Eigen::MatrixXd jac(ne, k);
  sys.residual(v, f);
  double fn = f.norm();
  double lambda = 1e-3;
  const double polish_floor = target * 1e-6;
  for (int it = 0; it < 200 && fn > polish_floor; ++it) {
    sys.jacobian(v, jac);
    const Eigen::MatrixXd h = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * f;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd hl = h;
      hl.diagonal().array() += lambda;
      const Eigen::VectorXd step = hl.ldlt().solve(grad);
      const Eigen::VectorXd cand = v - step;
      sys.residual(cand, fc);
      const double fcn = fc.norm();
      if (fcn < fn) {
        v = cand;
        f = fc;
        fn = fcn;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return fn <= target;
}

/// Magnitude initialization from the lags hit by exactly one pair:
/// log|v_i| + log|v_j| = log|a(lag)| is linear in the log magnitudes.
Eigen::VectorXd log_magnitude_init(const std::vector<LagEquation>& eqs, const Autocorrelation& a,
                                   int k) {
  std::vector<std::pair<std::pair<int, int>, double>> rows;
  for (const auto& eq : eqs) {
    if (eq.pairs.size() == 1 && std::fabs(a.at(eq.lag)) > 0.0) {
      rows.push_back({eq.pairs.front(), std::log(std::fabs(a.at(eq.lag)))});
    }
  }
  const double fallback = 0.5 * std::log(std::max(a.at(0), 1e-300) / std::max(k, 1));
  Eigen::VectorXd logv = Eigen::VectorXd::Constant(k, fallback);
  if (!rows.empty()) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), k);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      r(static_cast<Eigen::Index>(i), rows[i].first.first) = 1.0;
      r(static_cast<Eigen::Index>(i), rows[i].first.second) = 1.0;
      rhs(static_cast<Eigen::Index>(i)) = rows[i].second;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(r);
    const Eigen::VectorXd sol = cod.solve(rhs);
    for (int i = 0; i < k; ++i) {
      if (r.col(i).norm() > 0.0) logv(i) = sol(i);
    }
  }
  return logv;
}

/// All value assignments on a fixed support that reproduce the lag equations:
/// the closed form for all-distinct-difference supports, otherwise sign
/// enumeration with Gauss-Newton refinement from the log-magnitude start.
std::vector<Eigen::VectorXd> values_on_support(const std::vector<int>& t,
                                               const Autocorrelation& a, double tol) {
  const int k = static_cast<int>(t.size());
  const std::vector<LagEquation> eqs = build_lag_equations(t);
  bool sidon = true;
  for (const auto& eq : eqs) {
    if (eq.pairs.size() > 1) sidon = false;
    // A lag realized by exactly one pair must be visible in a: that product
    // of nonzero values cannot vanish.
    if (eq.pairs.size() == 1 && std::fabs(a.at(eq.lag)) <= tol) return {};
  }
  if (sidon) {
    // The quadratic loses half the working digits near a double root, so a
    // split pair arrives ~sqrt(noise) apart and would dedup as two orbits;
    // Newton through the full lag system is regular there and collapses the
    // pair back onto one solution.
    std::vector<Eigen::VectorXd> sols = sidon_value_solutions(t, a);
    const BilinearSystem sys{eqs, a};
    for (Eigen::VectorXd& v : sols) refine_values(sys, tol, v);
    return sols;
  }

  std::vector<Eigen::VectorXd> out;
  const BilinearSystem sys{eqs, a};
  const Eigen::VectorXd logv = log_magnitude_init(eqs, a, k);
  const double target = tol;
  for (std::uint64_t pattern = 0; pattern < (1ull << (k - 1)); ++pattern) {
    Eigen::VectorXd v(k);
    v(0) = std::exp(logv(0));
    for (int i = 1; i < k; ++i) {
      const double sign = (pattern & (1ull << (i - 1))) ? -1.0 : 1.0;
      v(i) = sign * std::exp(logv(i));
    }
    if (refine_values(sys, target, v)) {
      out.push_back(v);
      continue;
    }
    // Flat-magnitude retry for starts the log system placed badly.
    Eigen::VectorXd v2(k);
    const double flat = std::sqrt(std::max(a.at(0), 0.0) / std::max(k, 1));
    v2(0) = flat;
    for (int i = 1; i < k; ++i) {
      v2(i) = ((pattern & (1ull << (i - 1))) ? -1.0 : 1.0) * flat;
    }
    if (refine_values(sys, target, v2)) out.push_back(v2);
  }
  return out;
}

}  // namespace

SignalFromAutocorrResult signal_from_autocorrelation(const Autocorrelation& a, int k,
                                                     const SignalFromAutocorrOptions& opts) {
  const int m = a.signal_length();
  if (k < 0 || k > m) throw std::invalid_argument("signal_from_autocorrelation: need 0 <= k <= M");
  SignalFromAutocorrResult result{RealSignal::zeros(m), false, {}, {}};
  if (k > opts.k_cap) {
    if (k == 6) {
      result.warnings.push_back(
          "k = 6: equal-valued signals in this class are only almost surely unique; "
          "non-equivalent solutions may appear");
    } else {
      throw CapExceededError("signal_from_autocorrelation: k = " + std::to_string(k) +
                             " exceeds cap " + std::to_string(opts.k_cap));
    }
  }

  double a_inf = 0.0;
  for (double v : a.lags()) a_inf = std::max(a_inf, std::fabs(v));
  const double tol = opts.tol * std::max(1.0, a_inf);
  if (!a.is_centro_symmetric(tol)) {
    throw std::invalid_argument("signal_from_autocorrelation: input is not centro-symmetric");
  }
  const double a0 = a.at(0);
  if (a0 < -tol) {
    throw NoSolutionError(
        "signal_from_autocorrelation: a(0) is the signal energy and cannot be negative");
  }

  std::vector<int> d_plus;
  for (int lag = 1; lag < m; ++lag) {
    if (std::fabs(a.at(lag)) > tol) d_plus.push_back(lag);
  }

  if (std::fabs(a0) <= tol && d_plus.empty()) {
    return result;  // zero autocorrelation: the zero signal, any k
  }
  if (k == 0) {
    throw NoSolutionError("signal_from_autocorrelation: nonzero autocorrelation needs k >= 1");
  }
  if (k == 1) {
    if (!d_plus.empty() || a0 <= tol) {
      throw NoSolutionError("signal_from_autocorrelation: no 1-sparse signal matches");
    }
    result.canonical = autocorr_preserving_canonical(
        RealSignal::from_support(m, {0}, {std::sqrt(a0)}));
    return result;
  }
  if (d_plus.empty()) {
    throw NoSolutionError(
        "signal_from_autocorrelation: k >= 2 requires a nonzero top lag (the product of the "
        "outermost entries never cancels)");
  }

  // The largest nonzero lag is realized only by the outermost support pair,
  // so the support spread is exactly lmax and turnpike candidates live in
  // {0..lmax} with both endpoints pinned.
  const int lmax = d_plus.back();
  if (k > lmax + 1) {
    throw NoSolutionError("signal_from_autocorrelation: k exceeds the support spread");
  }
  const std::uint64_t total = binomial(lmax - 1, k - 2);
  if (total > opts.support_cap) {
    throw CapExceededError("signal_from_autocorrelation: candidate supports exceed cap");
  }

  const int workers = opts.workers < 1 ? 1 : opts.workers;
  std::vector<std::vector<RealSignal>> found(static_cast<std::size_t>(workers));
  parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
    std::vector<int> middle =
        k > 2 ? combination_from_rank(begin, lmax - 1, k - 2) : std::vector<int>{};
    for (std::uint64_t r = begin; r < end; ++r) {
      if (r > begin) next_combination(middle, lmax - 1);
      std::vector<int> t;
      t.reserve(static_cast<std::size_t>(k));
      t.push_back(0);
      for (int idx : middle) t.push_back(idx + 1);
      t.push_back(lmax);

      // Every visible lag must be a support difference.
      std::vector<LagEquation> eqs = build_lag_equations(t);
      bool covers = true;
      std::size_t e = 0;
      for (int lag : d_plus) {
        while (e < eqs.size() && eqs[e].lag < lag) ++e;
        if (e == eqs.size() || eqs[e].lag != lag) {
          covers = false;
          break;
        }
      }
      if (!covers) continue;

      for (const Eigen::VectorXd& v : values_on_support(t, a, tol)) {
        std::vector<double> vals(v.data(), v.data() + v.size());
        RealSignal cand = RealSignal::from_support(m, t, vals);
        if (autocorr_matches(cand, a, tol)) {
          found[static_cast<std::size_t>(w)].push_back(std::move(cand));
        }
      }
    }
  });

  std::vector<RealSignal> reps;
  for (const auto& chunk : found) {
    for (const RealSignal& cand : chunk) {
      bool known = false;
      for (const RealSignal& rep : reps) {
        if (equivalent_under_invariances(cand, rep, InvarianceGroup::Full)) {
          known = true;
          break;
        }
      }
      if (!known) reps.push_back(autocorr_preserving_canonical(cand));
    }
  }
  if (reps.empty()) {
    throw NoSolutionError("signal_from_autocorrelation: no " + std::to_string(k) +
                          "-sparse signal has this autocorrelation");
  }
  result.canonical = reps.front();
  result.multiple = reps.size() > 1;
  result.alternates.assign(reps.begin() + 1, reps.end());
  return result;
}

FmmRecoveryReport fmm_recover(const IntensityMeasurements& y, const std::vector<int>& freqs,
                              int m, int k, const FmmOptions& opts) {
  if (k < 0) throw std::invalid_argument("fmm_recover: need k >= 0");
  const int s_max = k * k - k + 1;  // arrangement sparsity of a collision-free k-sparse signal
  AutocorrRecovery stage1 = recover_autocorrelation(y, freqs, m, s_max, opts.autocorr);

  FmmRecoveryReport report{RealSignal::zeros(m), {}, {}, {}, false, 0.0, {}};
  if (!stage1.unique) {
    report.warnings.push_back(
        "multiple sparsest arrangements satisfy the measurements; proceeding with the first");
  }
  if (!stage1.symmetric) {
    report.warnings.push_back(
        "recovered arrangement is not centro-symmetric; lags taken from its first half");
  }
  if (!stage1.uniqueness_hypothesis_ok) {
    report.warnings.push_back(
        "N is not prime or 2*||q||_0 > N: the sparsest arrangement is not certified unique");
  }

  const Autocorrelation a = stage1.q.to_autocorrelation();
  SignalFromAutocorrResult stage2 = signal_from_autocorrelation(a, k, opts.signal);
  report.solution = stage2.canonical;
  report.alternates = std::move(stage2.alternates);
  report.signal_multiple = stage2.multiple;
  for (auto& w : stage2.warnings) report.warnings.push_back(std::move(w));
  report.autocorr = std::move(stage1);
  report.conditions = check_fmm_conditions(report.solution, static_cast<int>(freqs.size()));

  const MeasurementEnsemble phi = MeasurementEnsemble::fourier(m, freqs);
  const IntensityMeasurements yhat = intensity_measure(phi, report.solution);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    const double d = yhat.values[i] - y.values[i];
    acc += d * d;
  }
  report.residual = std::sqrt(acc);
  return report;
}

}  // namespace sparsephase
