#include "sparsephase/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace sp = sparsephase;

TEST(Rng, SameSeedSameStreamIdentical) {
  sp::CounterRng a(42, 0);
  sp::CounterRng b(42, 0);
  for (std::uint64_t c = 0; c < 100; ++c) {
    EXPECT_EQ(a.u64_at(c), b.u64_at(c));
    EXPECT_EQ(a.gaussian_at(c), b.gaussian_at(c));
  }
}

TEST(Rng, StreamsDiffer) {
  sp::CounterRng a(42, 0);
  sp::CounterRng b(42, 1);
  int same = 0;
  for (std::uint64_t c = 0; c < 64; ++c) {
    if (a.u64_at(c) == b.u64_at(c)) ++same;
  }
  EXPECT_EQ(same, 0);
}

TEST(Rng, CursorMatchesCounterAddressing) {
  sp::CounterRng rng(7, 3);
  sp::CounterRng ref(7, 3);
  for (std::uint64_t c = 0; c < 32; ++c) {
    EXPECT_EQ(rng.next_u64(), ref.u64_at(c));
  }
  sp::CounterRng g(9, 0);
  sp::CounterRng gref(9, 0);
  for (std::uint64_t c = 0; c < 32; ++c) {
    EXPECT_EQ(g.next_gaussian(), gref.gaussian_at(c));
  }
}

TEST(Rng, UniformInUnitInterval) {
  sp::CounterRng rng(1, 0);
  for (std::uint64_t c = 0; c < 10000; ++c) {
    const double u = rng.uniform_at(c);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, GaussianMomentsRoughlyStandard) {
  sp::CounterRng rng(5, 0);
  const int n = 20000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Rng, GaussianValuesFinite) {
  sp::CounterRng rng(17, 2);
  for (std::uint64_t c = 0; c < 10000; ++c) {
    EXPECT_TRUE(std::isfinite(rng.gaussian_at(c)));
  }
}

TEST(Rng, DeriveSeedInjectiveOnRange) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    EXPECT_TRUE(seen.insert(sp::derive_seed(123, i)).second);
  }
  EXPECT_NE(sp::derive_seed(1, 0), sp::derive_seed(2, 0));
}

TEST(Rng, NextIndexInRangeAndCovers) {
  sp::CounterRng rng(3, 0);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = rng.next_index(5);
    ASSERT_LT(v, 5u);
    ++hits[static_cast<std::size_t>(v)];
  }
  for (int h : hits) EXPECT_GT(h, 700);
  sp::CounterRng one(3, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(one.next_index(1), 0u);
}
