#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsephase/complement.hpp"
#include "sparsephase/ensemble.hpp"
#include "sparsephase/signal.hpp"

namespace sparsephase {

struct RecoveryOptions {
  /// Refuse sparsity levels with more than this many candidate supports.
  std::uint64_t support_cap = 2000000;
  /// Rank-deficient lifted systems fall back to sign-pattern enumeration;
  /// skip that fallback when it would need more than this many sign bits.
  int sign_search_max = 16;
  /// Also run the min(2*sparsity, M)-complement check on the winning level
  /// and record its verdict in the report.
  bool check_certificate = false;
  int workers = 1;
  /// Measurement-space residual acceptance; default 1e-8 * ||y||_2.
  std::optional<double> residual_tol;
  ComplementOptions complement;  // used when check_certificate is set
};

struct RecoveryReport {
  /// Sparsest solution, sign-normalized (largest-magnitude entry positive).
  std::optional<RealSignal> solution;
  int sparsity_found = -1;
  /// Remaining solutions at the winning sparsity, pairwise non-equivalent
  /// under global sign.
  std::vector<RealSignal> alternates;
  /// min(2*sparsity_found, M)-complement verdict, when requested.
  std::optional<bool> certificate_checked;
  double residual = 0.0;
  /// True when an accepted solve had a rank-deficient lifted system: the
  /// solution satisfies the measurements but enumeration of that support
  /// cannot certify there is no other rank-1 completion.
  bool underdetermined = false;
  /// Rank-deficient supports whose sign enumeration exceeded sign_search_max
  /// and was skipped; nonzero means feasible solutions may have been missed.
  int skipped_sign_searches = 0;
};

/// Exact l0 oracle: for s = 0..k_max and every support of size s, solve the
/// lifted linear system y_n = phi_{n,K}^T X phi_{n,K} over symmetric X by
/// minimum-norm least squares, accept X that is near-PSD and near-rank-1, and
/// extract x = sqrt(lambda_1) * (top eigenvector). All supports at the winning
/// sparsity are processed so the alternates list is complete at that level.
/// Throws NoSolutionError when nothing matches up to k_max.
RecoveryReport l0_recover(const MeasurementEnsemble& phi, const IntensityMeasurements& y,
                          int k_max, const RecoveryOptions& opts = {});

enum class UniquenessVerdict { GuaranteedUnique, EmpiricallyUnique, Ambiguous };

struct UniquenessReport {
  UniquenessVerdict verdict;
  /// Complement order actually checked: min(2*||x0||_0, M). The clamp keeps
  /// the check meaningful when 2*||x0||_0 exceeds the dimension (any
  /// colliding pair is supported on at most M coordinates anyway).
  int k_checked = 0;
  /// A solution not equivalent to x0 under global sign (Ambiguous only).
  std::optional<RealSignal> witness;
  /// Populated when the empirical recovery path ran.
  std::optional<RecoveryReport> recovery;
};

/// GuaranteedUnique when the min(2*||x0||_0, M)-complement property holds;
/// otherwise recovers from y = A(x0) and reports EmpiricallyUnique when only
/// the orbit of x0 appears at sparsity <= ||x0||_0, else Ambiguous.
UniquenessReport verify_uniqueness(const MeasurementEnsemble& phi, const RealSignal& x0,
                                   const RecoveryOptions& opts = {});

}  // namespace sparsephase
