#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsephase/ensemble.hpp"
#include "sparsephase/signal.hpp"

namespace sparsephase {

bool is_prime(int n);

/// Smallest prime strictly greater than 2(k^2 - k + 1): the least measurement
/// count satisfying the uniqueness theorem's prime gate for sparsity k.
int next_valid_N(int k);

enum class K6Case { NotK6, K6DistinctValues, K6AllEqual };
enum class FmmVerdict { Unique, UniqueAlmostSurely, NotGuaranteed };

struct FmmConditionReport {
  int k = 0;
  int n = 0;
  bool n_is_prime = false;
  bool bound_ok = false;  // N > 2(k^2 - k + 1)
  bool collision_free = false;
  K6Case k6_case = K6Case::NotK6;
  FmmVerdict verdict = FmmVerdict::NotGuaranteed;
  std::vector<std::string> reasons;  // failed hypotheses, empty unless NotGuaranteed
};

/// Hypothesis checklist for uniqueness of x0 from N Fourier magnitudes:
/// Unique when N is prime, N > 2(k^2-k+1), x0 is collision free, and the
/// sparsity-6 equal-values corner is absent; that corner alone downgrades the
/// verdict to UniqueAlmostSurely.
FmmConditionReport check_fmm_conditions(const RealSignal& x0, int n);

/// q = [a(0), a(1), ..., a(M-1), 0, a(M-1), ..., a(1)]: the length-2M
/// arrangement whose partial DFT reproduces the intensity measurements
/// (Wiener-Khinchin). Entry M is pinned to zero.
struct PaddedAutocorrArrangement {
  std::vector<double> q;

  int signal_length() const { return static_cast<int>(q.size()) / 2; }
  static PaddedAutocorrArrangement from_autocorrelation(const Autocorrelation& a);
  /// Reads lags off the first half; callers should check is_symmetric first
  /// when q came from an unconstrained solve.
  Autocorrelation to_autocorrelation() const;
  int nonzero_count(double tol = 0.0) const;
  bool is_symmetric(double tol) const;  // q(j) == q(2M-j) for j = 1..M-1
};

struct AutocorrRecoveryOptions {
  std::uint64_t support_cap = 2000000;
  /// Solve for the M half-lags instead of all 2M-1 free entries; valid
  /// because the arrangement is centro-symmetric when the model holds.
  bool exploit_symmetry = false;
  int workers = 1;
  std::optional<double> linear_tol;  // default 1e-8 * ||y||_2
};

struct AutocorrRecovery {
  PaddedAutocorrArrangement q;  // first sparsest solution in scan order
  std::vector<PaddedAutocorrArrangement> alternates;
  int sparsity_found = 0;
  bool unique = true;
  /// N prime and 2 * sparsity_found <= N: the regime where the sparsest
  /// solution to the partial-DFT system is provably the only one.
  bool uniqueness_hypothesis_ok = false;
  /// Centro-symmetry of the returned q, validated (never imposed) in the
  /// default mode; true by construction under exploit_symmetry.
  bool symmetric = false;
};

/// Sparsest length-2M arrangement q with q(M) = 0 satisfying all N linear
/// measurement equations within tolerance, by support enumeration over the
/// 2M-1 free positions. All supports at the winning sparsity are scanned;
/// distinct solutions are reported as alternates with unique = false.
/// Throws NoSolutionError when nothing fits up to s_max.
AutocorrRecovery recover_autocorrelation(const IntensityMeasurements& y,
                                         const std::vector<int>& freqs, int m, int s_max,
                                         const AutocorrRecoveryOptions& opts = {});

struct SignalFromAutocorrOptions {
  /// Hard sparsity cap; k = 6 is accepted past it with a warning because the
  /// equal-values corner can admit non-equivalent solutions.
  int k_cap = 5;
  double tol = 1e-8;  // lag-residual acceptance, scaled by max(1, ||a||_inf)
  std::uint64_t support_cap = 2000000;
  int workers = 1;
};

struct SignalFromAutocorrResult {
  /// Deterministic representative of the solution orbit. Lexicographically
  /// smallest under sign, mirror, and the non-wrapping shifts, so its
  /// autocorrelation still equals the input exactly (wrapping circular
  /// shifts would change it).
  RealSignal canonical;
  bool multiple = false;
  std::vector<RealSignal> alternates;  // representatives of other orbits
  std::vector<std::string> warnings;
};

/// Inverts a(l) = sum_s x(s) x(s+l) for a k-sparse x: candidate supports come
/// turnpike-style from the nonzero-lag difference set, values from a closed
/// form on supports with all-distinct differences and from sign-pattern
/// enumeration plus Gauss-Newton otherwise; every candidate is accepted only
/// if its full autocorrelation reproduces a. Orbits under the invariance
/// group are deduplicated; extra orbits set `multiple`.
SignalFromAutocorrResult signal_from_autocorrelation(const Autocorrelation& a, int k,
                                                     const SignalFromAutocorrOptions& opts = {});

struct FmmOptions {
  AutocorrRecoveryOptions autocorr;
  SignalFromAutocorrOptions signal;
};

struct FmmRecoveryReport {
  RealSignal solution;  // autocorrelation-preserving canonical representative
  std::vector<RealSignal> alternates;
  FmmConditionReport conditions;  // evaluated on the recovered signal
  AutocorrRecovery autocorr;      // stage 1: arrangement sparsity and multiplicity
  bool signal_multiple = false;   // stage 2 multiplicity
  double residual = 0.0;          // || A(solution) - y ||_2
  std::vector<std::string> warnings;
};

/// Full pipeline: sparse autocorrelation recovery from the Fourier
/// magnitudes, then signal reconstruction from the autocorrelation. Both
/// stages' multiplicity flags survive into the report; the condition
/// checklist is evaluated on the recovered signal.
FmmRecoveryReport fmm_recover(const IntensityMeasurements& y, const std::vector<int>& freqs,
                              int m, int k, const FmmOptions& opts = {});

}  // namespace sparsephase
