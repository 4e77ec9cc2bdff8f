#include "sparsephase/signal.hpp"

#include "sparsephase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace sparsephase {

namespace {

std::vector<int> compute_support(const std::vector<double>& values) {
  std::vector<int> support;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<std::size_t>(i)] != 0.0) support.push_back(i);
  }
  return support;
}

}  // namespace

RealSignal::RealSignal(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("RealSignal: length must be >= 1");
  support_ = compute_support(values_);
}

RealSignal RealSignal::zeros(int m) {
  if (m < 1) throw std::invalid_argument("RealSignal: length must be >= 1");
  return RealSignal(std::vector<double>(static_cast<std::size_t>(m), 0.0));
}

RealSignal RealSignal::from_support(int m, const std::vector<int>& support,
                                    const std::vector<double>& values) {
  if (support.size() != values.size()) {
    throw std::invalid_argument("RealSignal: support/value size mismatch");
  }
  std::vector<double> full(static_cast<std::size_t>(m), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int idx = support[i];
    if (idx < 0 || idx >= m) throw std::invalid_argument("RealSignal: support index out of range");
    full[static_cast<std::size_t>(idx)] = values[i];
  }
  return RealSignal(std::move(full));
}

double RealSignal::inf_norm() const {
  double norm = 0.0;
  for (double v : values_) norm = std::max(norm, std::fabs(v));
  return norm;
}

double RealSignal::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

Autocorrelation::Autocorrelation(std::vector<double> lags) : lags_(std::move(lags)) {
  if (lags_.empty() || lags_.size() % 2 == 0) {
    throw std::invalid_argument("Autocorrelation: needs 2M-1 lags");
  }
}

int Autocorrelation::nonzero_lag_count(double tol) const {
  int count = 0;
  for (double v : lags_) {
    if (std::fabs(v) > tol) ++count;
  }
  return count;
}

bool Autocorrelation::is_centro_symmetric(double tol) const {
  const int m = signal_length();
  for (int l = 1; l < m; ++l) {
    if (std::fabs(at(l) - at(-l)) > tol) return false;
  }
  return true;
}

int Autocorrelation::max_nonzero_lag(double tol) const {
  for (int l = signal_length() - 1; l >= 0; --l) {
    if (std::fabs(at(l)) > tol) return l;
  }
  return -1;
}

Autocorrelation autocorrelation(const RealSignal& x) {
  const int m = x.size();
  std::vector<double> lags(static_cast<std::size_t>(2 * m - 1), 0.0);
  for (int l = 0; l < m; ++l) {
    double acc = 0.0;
    for (int s = 0; s + l < m; ++s) acc += x[s] * x[s + l];
    lags[static_cast<std::size_t>(m - 1 + l)] = acc;
    lags[static_cast<std::size_t>(m - 1 - l)] = acc;  // mirrored, not recomputed
  }
  return Autocorrelation(std::move(lags));
}

RealSignal apply(const InvarianceAction& g, const RealSignal& x) {
  const int m = x.size();
  const int shift = ((g.shift % m) + m) % m;
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    int src = j - shift;
    src = ((src % m) + m) % m;
    if (g.mirror) src = m - 1 - src;
    out[static_cast<std::size_t>(j)] = g.sign * x[src];
  }
  return RealSignal(std::move(out));
}

namespace {

// Index map of an action as j -> eps*j + c (mod m); eps=-1 iff mirrored.
int action_offset(const InvarianceAction& g, int m) {
  const int shift = ((g.shift % m) + m) % m;
  const int c = g.mirror ? shift + m - 1 : -shift;
  return ((c % m) + m) % m;
}

}  // namespace

InvarianceAction compose(const InvarianceAction& second, const InvarianceAction& first, int m) {
  const int eps_first = first.mirror ? -1 : 1;
  const int c = eps_first * action_offset(second, m) + action_offset(first, m);
  const int c_mod = ((c % m) + m) % m;
  InvarianceAction out;
  out.sign = second.sign * first.sign;
  out.mirror = first.mirror != second.mirror;
  out.shift = out.mirror ? (c_mod + 1) % m : (m - c_mod) % m;
  return out;
}

InvarianceAction inverse(const InvarianceAction& g, int m) {
  InvarianceAction out = g;
  out.shift = ((g.shift % m) + m) % m;
  if (!g.mirror) out.shift = (m - out.shift) % m;
  // Mirrored actions are involutions: their index map is its own inverse.
  return out;
}

bool is_non_wrapping(const InvarianceAction& g, const RealSignal& x) {
  const int m = x.size();
  const int shift = ((g.shift % m) + m) % m;
  for (int idx : x.support()) {
    const int pos = g.mirror ? m - 1 - idx : idx;
    if (pos + shift >= m) return false;
  }
  return true;
}

std::pair<RealSignal, InvarianceAction> canonicalize(const RealSignal& x) {
  const int m = x.size();
  RealSignal best = x;
  InvarianceAction best_action = InvarianceAction::identity();
  bool have = false;
  for (int sign : {+1, -1}) {
    for (bool mirror : {false, true}) {
      for (int shift = 0; shift < m; ++shift) {
        const InvarianceAction g{sign, mirror, shift};
        RealSignal candidate = apply(g, x);
        if (!have || std::lexicographical_compare(candidate.values().begin(),
                                                  candidate.values().end(),
                                                  best.values().begin(), best.values().end())) {
          best = std::move(candidate);
          best_action = g;
          have = true;
        }
      }
    }
  }
  return {best, best_action};
}

namespace {

double default_equiv_tol(const RealSignal& x1, const RealSignal& x2) {
  return 1e-9 * std::max({1.0, x1.inf_norm(), x2.inf_norm()});
}

bool within(const RealSignal& a, const RealSignal& b, double tol) {
  for (int i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

bool equivalent_under_invariances(const RealSignal& x1, const RealSignal& x2,
                                  InvarianceGroup group, std::optional<double> tol) {
  if (x1.size() != x2.size()) {
    throw std::invalid_argument("equivalent_under_invariances: length mismatch");
  }
  const double eps = tol.value_or(default_equiv_tol(x1, x2));
  const int m = x1.size();
  if (group == InvarianceGroup::SignOnly) {
    for (int sign : {+1, -1}) {
      if (within(apply({sign, false, 0}, x1), x2, eps)) return true;
    }
    return false;
  }
  for (int sign : {+1, -1}) {
    for (bool mirror : {false, true}) {
      for (int shift = 0; shift < m; ++shift) {
        if (within(apply({sign, mirror, shift}, x1), x2, eps)) return true;
      }
    }
  }
  return false;
}

CollisionCheck is_collision_free(const RealSignal& x, CollisionMode mode) {
  const std::vector<int>& supp = x.support();
  const int t = static_cast<int>(supp.size());
  if (t < 4) return {true, std::nullopt};

  if (mode == CollisionMode::SupportIndex) {
    // Scan positive differences in increasing order; a collision is two
    // index-disjoint pairs with the same difference.
    const int max_diff = supp.back() - supp.front();
    for (int d = 1; d <= max_diff; ++d) {
      std::vector<std::pair<int, int>> pairs;  // (i, j) with i - j = d
      for (int a = 0; a < t; ++a) {
        for (int b = 0; b < t; ++b) {
          if (supp[static_cast<std::size_t>(a)] - supp[static_cast<std::size_t>(b)] == d) {
            pairs.emplace_back(supp[static_cast<std::size_t>(a)], supp[static_cast<std::size_t>(b)]);
          }
        }
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (std::size_t q = p + 1; q < pairs.size(); ++q) {
          const auto& [i, j] = pairs[p];
          const auto& [k, l] = pairs[q];
          if (i != k && i != l && j != k && j != l) {
            return {false, CollisionWitness{i, j, k, l}};
          }
        }
      }
    }
    return {true, std::nullopt};
  }

  // Value mode: exact comparison of value differences, meant for signals
  // constructed in exact arithmetic.
  std::map<double, std::vector<std::pair<int, int>>> buckets;
  for (int a = 0; a < t; ++a) {
    for (int b = 0; b < t; ++b) {
      if (a == b) continue;
      const int i = supp[static_cast<std::size_t>(a)];
      const int j = supp[static_cast<std::size_t>(b)];
      const double diff = x[i] - x[j];
      auto& bucket = buckets[diff];
      for (const auto& [k, l] : bucket) {
        if (i != k && i != l && j != k && j != l) {
          return {false, CollisionWitness{k, l, i, j}};
        }
      }
      bucket.emplace_back(i, j);
    }
  }
  return {true, std::nullopt};
}

bool has_distinct_support_differences(const RealSignal& x) {
  const std::vector<int>& supp = x.support();
  std::set<int> diffs;
  for (std::size_t a = 0; a < supp.size(); ++a) {
    for (std::size_t b = a + 1; b < supp.size(); ++b) {
      if (!diffs.insert(supp[b] - supp[a]).second) return false;
    }
  }
  return true;
}

namespace {

std::vector<int> random_support(int m, int k, CounterRng& rng) {
  // Partial Fisher-Yates over 0..m-1.
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace

RealSignal random_sparse_signal(int m, int k, CounterRng& rng) {
  if (k < 0 || k > m) throw std::invalid_argument("random_sparse_signal: need 0 <= k <= m");
  const std::vector<int> support = random_support(m, k, rng);
  std::vector<double> values(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double v = rng.next_gaussian();
    while (v == 0.0) v = rng.next_gaussian();
    values[static_cast<std::size_t>(i)] = v;
  }
  return RealSignal::from_support(m, support, values);
}

RealSignal random_collision_free_integer_signal(int m, int k, CounterRng& rng,
                                                int max_abs_value) {
  if (k < 0 || k > m) throw std::invalid_argument("need 0 <= k <= m");
  if (max_abs_value < 1) throw std::invalid_argument("need max_abs_value >= 1");
  if (k >= 2 && static_cast<std::uint64_t>(k) * (k - 1) / 2 > static_cast<std::uint64_t>(m - 1)) {
    throw std::invalid_argument("no support with distinct pairwise differences fits in this length");
  }
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const std::vector<int> support = random_support(m, k, rng);
    std::set<int> diffs;
    bool distinct = true;
    for (std::size_t a = 0; a < support.size() && distinct; ++a) {
      for (std::size_t b = a + 1; b < support.size(); ++b) {
        if (!diffs.insert(support[b] - support[a]).second) {
          distinct = false;
          break;
        }
      }
    }
    if (!distinct) continue;
    std::vector<double> values(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const std::uint64_t draw = rng.next_index(static_cast<std::uint64_t>(2 * max_abs_value));
      const int v = static_cast<int>(draw) - max_abs_value;
      values[static_cast<std::size_t>(i)] = static_cast<double>(v >= 0 ? v + 1 : v);
    }
    return RealSignal::from_support(m, support, values);
  }
  throw NoSolutionError("random_collision_free_integer_signal: rejection sampling failed");
}

}  // namespace sparsephase
