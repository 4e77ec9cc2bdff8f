#pragma once

#include <cmath>
#include <cstdint>

namespace sparsephase {

// Deterministic counter-based random numbers.
//
// Every draw is addressed by (seed, stream, counter), so values never depend
// on generation order or on how work is split across threads. The exact
// algorithm is part of the reproducibility contract and must not change:
//
//   key(seed, stream)   = mix64(seed + GOLDEN * (stream + 1))
//   u64(key, counter)   = mix64(key + GOLDEN * (counter + 1))
//   uniform             = (u64 >> 11) * 2^-53                     in [0, 1)
//   gaussian(counter)   = sqrt(-2 ln(1 - u_a)) * cos(2 pi u_b)
//                         with u_a, u_b the uniforms at counters
//                         2*counter and 2*counter + 1
//
// mix64 is the SplitMix64 finalizer (a bijection on 64-bit integers), and
// GOLDEN is the SplitMix64 increment 0x9e3779b97f4a7c15.

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Collision-free per-index subseed (mix64 is a bijection).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + kGoldenGamma * (index + 1));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed + kGoldenGamma * (stream + 1))) {}

  std::uint64_t u64_at(std::uint64_t counter) const {
    return mix64(key_ + kGoldenGamma * (counter + 1));
  }

  /// Uniform double in [0, 1) at a fixed counter.
  double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(u64_at(counter) >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw addressed by `counter`; consumes uniform slots
  /// 2*counter and 2*counter + 1 (Box-Muller, cosine branch).
  double gaussian_at(std::uint64_t counter) const {
    const double ua = uniform_at(2 * counter);
    const double ub = uniform_at(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log1p(-ua));
    return r * std::cos(2.0 * M_PI * ub);
  }

  // Sequential convenience interface over the same address space.
  std::uint64_t next_u64() { return u64_at(cursor_++); }
  double next_uniform() { return uniform_at(cursor_++); }
  double next_gaussian() {
    const std::uint64_t c = cursor_;
    cursor_ += 2;
    const double ua = uniform_at(c);
    const double ub = uniform_at(c + 1);
    return std::sqrt(-2.0 * std::log1p(-ua)) * std::cos(2.0 * M_PI * ub);
  }

  /// Uniform integer in [0, n), n >= 1 (Lemire multiply-shift; biasless
  /// enough at 64 bits for experiment purposes and fully deterministic).
  std::uint64_t next_index(std::uint64_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(wide >> 64);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t cursor_ = 0;
};

}  // namespace sparsephase
