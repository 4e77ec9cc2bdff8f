#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sparsephase/rng.hpp"

namespace sparsephase {

/// Real length-M signal with cached support. Immutable after construction;
/// the support is the set of indices whose value is exactly nonzero (signals
/// in this library are constructed, not measured).
class RealSignal {
 public:
  RealSignal() = default;
  explicit RealSignal(std::vector<double> values);
  static RealSignal zeros(int m);
  static RealSignal from_support(int m, const std::vector<int>& support,
                                 const std::vector<double>& values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& support() const { return support_; }
  int sparsity() const { return static_cast<int>(support_.size()); }

  double inf_norm() const;
  double squared_norm() const;

  bool operator==(const RealSignal& other) const { return values_ == other.values_; }

 private:
  std::vector<double> values_;
  std::vector<int> support_;
};

/// Autocorrelation a(l) = sum_s x(s) x(s+l) for l in [-(M-1), M-1], stored as
/// 2M-1 entries with lag l at offset l + (M-1). Centro-symmetric by
/// construction: negative lags are mirrored from positive ones, never
/// recomputed.
class Autocorrelation {
 public:
  explicit Autocorrelation(std::vector<double> lags);

  int signal_length() const { return (static_cast<int>(lags_.size()) + 1) / 2; }
  double at(int lag) const { return lags_[static_cast<std::size_t>(lag + signal_length() - 1)]; }
  const std::vector<double>& lags() const { return lags_; }

  int nonzero_lag_count(double tol = 0.0) const;
  bool is_centro_symmetric(double tol = 0.0) const;
  /// Largest lag l >= 0 with |a(l)| > tol, or -1 if all lags vanish.
  int max_nonzero_lag(double tol = 0.0) const;

 private:
  std::vector<double> lags_;
};

Autocorrelation autocorrelation(const RealSignal& x);

/// Element of the invariance group: global sign, mirroring, and a circular
/// shift of the length-M window. Applied as: mirror, then shift right by
/// `shift` positions (mod M), then multiply by `sign`.
struct InvarianceAction {
  int sign = +1;
  bool mirror = false;
  int shift = 0;

  static InvarianceAction identity() { return {}; }
  bool operator==(const InvarianceAction&) const = default;
};

RealSignal apply(const InvarianceAction& g, const RealSignal& x);
/// Composition acting as second after first: apply(compose(g2,g1,m), x) ==
/// apply(g2, apply(g1, x)) for signals of length m.
InvarianceAction compose(const InvarianceAction& second, const InvarianceAction& first, int m);
InvarianceAction inverse(const InvarianceAction& g, int m);

/// True when applying g to a signal with this support wraps no support index
/// around the end of the window (autocorrelation is invariant exactly for
/// such actions).
bool is_non_wrapping(const InvarianceAction& g, const RealSignal& x);

/// Lexicographically smallest vector in the orbit of x under
/// {sign} x {mirror} x {shifts}, plus the action achieving it.
std::pair<RealSignal, InvarianceAction> canonicalize(const RealSignal& x);

enum class InvarianceGroup { SignOnly, Full };

/// Orbit equality test: true iff some group element maps x1 onto x2 within
/// tolerance (default 1e-9 * max(1, ||x1||_inf, ||x2||_inf)).
bool equivalent_under_invariances(const RealSignal& x1, const RealSignal& x2,
                                  InvarianceGroup group = InvarianceGroup::SignOnly,
                                  std::optional<double> tol = std::nullopt);

enum class CollisionMode {
  SupportIndex,  // differences i-j of support indices (default)
  Value,         // differences x(i)-x(j) of support values (the literal rule)
};

struct CollisionWitness {
  int i, j, k, l;
};

struct CollisionCheck {
  bool collision_free;
  std::optional<CollisionWitness> witness;
};

/// Collision test over quadruples of pairwise-distinct support indices:
/// collision-free iff no two index-disjoint pairs share a difference. The
/// Value mode compares value differences instead and is intended for
/// exact-arithmetic signals.
CollisionCheck is_collision_free(const RealSignal& x,
                                 CollisionMode mode = CollisionMode::SupportIndex);

/// Stronger condition than is_collision_free: every ordered pair of distinct
/// support indices has a distinct difference (a Sidon support). This is what
/// makes the autocorrelation hit each lag with at most one product, so a
/// k-sparse signal with such a support has exactly k^2-k+1 nonzero lags.
bool has_distinct_support_differences(const RealSignal& x);

/// k-sparse signal with uniformly random support and standard normal values.
RealSignal random_sparse_signal(int m, int k, CounterRng& rng);

/// k-sparse integer signal (values in +-{1..max_abs_value}) whose support has
/// all pairwise differences distinct; rejection-sampled.
RealSignal random_collision_free_integer_signal(int m, int k, CounterRng& rng,
                                                int max_abs_value = 9);

}  // namespace sparsephase
