#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace sparsephase {

/// C(n, k), saturating at uint64 max instead of overflowing.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > kMax / num) return kMax;
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

/// First k-combination of {0..n-1} in lexicographic order.
inline std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

/// Advance to the next k-combination of {0..n-1}; false when exhausted.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] < n - k + i) {
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

/// Lexicographic rank -> combination (combinatorial number system), used to
/// hand disjoint enumeration blocks to workers.
inline std::vector<int> combination_from_rank(std::uint64_t rank, int n, int k) {
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(k));
  int start = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int v = start; v <= n - (k - slot); ++v) {
      const std::uint64_t block = binomial(n - v - 1, k - slot - 1);
      if (rank < block) {
        c.push_back(v);
        start = v + 1;
        break;
      }
      rank -= block;
    }
  }
  return c;
}

}  // namespace sparsephase
