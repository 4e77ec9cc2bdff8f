#include "sparsephase/fmm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sparsephase/errors.hpp"
#include "sparsephase/rng.hpp"

namespace sp = sparsephase;

namespace {

std::vector<int> all_freqs(int n) {
  std::vector<int> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), 0);
  return f;
}

sp::IntensityMeasurements fourier_measurements(const sp::RealSignal& x,
                                               const std::vector<int>& freqs) {
  return sp::intensity_measure(sp::MeasurementEnsemble::fourier(x.size(), freqs), x);
}

void expect_autocorr_equal(const sp::Autocorrelation& lhs, const sp::Autocorrelation& rhs,
                           double tol) {
  ASSERT_EQ(lhs.signal_length(), rhs.signal_length());
  for (int l = 0; l < lhs.signal_length(); ++l) {
    EXPECT_NEAR(lhs.at(l), rhs.at(l), tol) << "lag " << l;
  }
}

}  // namespace

TEST(Primes, PrimalityAndNextValid) {
  EXPECT_FALSE(sp::is_prime(0));
  EXPECT_FALSE(sp::is_prime(1));
  EXPECT_TRUE(sp::is_prime(2));
  EXPECT_TRUE(sp::is_prime(17));
  EXPECT_FALSE(sp::is_prime(49));
  EXPECT_TRUE(sp::is_prime(97));
  EXPECT_EQ(sp::next_valid_N(1), 3);
  EXPECT_EQ(sp::next_valid_N(2), 7);
  EXPECT_EQ(sp::next_valid_N(3), 17);
  for (int k = 1; k <= 8; ++k) {
    const int bound = 2 * (k * k - k + 1);
    const int n = sp::next_valid_N(k);
    EXPECT_GT(n, bound);
    EXPECT_TRUE(sp::is_prime(n));
    // Minimality: nothing between the bound and n is prime.
    for (int c = bound + 1; c < n; ++c) EXPECT_FALSE(sp::is_prime(c)) << c;
  }
}

TEST(FmmConditions, VerdictsPerHypothesis) {
  const auto x2 = sp::RealSignal::from_support(8, {1, 4}, {1.0, -2.0});
  const auto unique = sp::check_fmm_conditions(x2, 7);
  EXPECT_EQ(unique.verdict, sp::FmmVerdict::Unique);
  EXPECT_TRUE(unique.n_is_prime);
  EXPECT_TRUE(unique.bound_ok);
  EXPECT_TRUE(unique.collision_free);
  EXPECT_EQ(unique.k6_case, sp::K6Case::NotK6);
  EXPECT_TRUE(unique.reasons.empty());

  const auto x3 = sp::RealSignal::from_support(9, {0, 1, 3}, {1.0, 1.0, 1.0});
  const auto bound = sp::check_fmm_conditions(x3, 13);
  EXPECT_EQ(bound.verdict, sp::FmmVerdict::NotGuaranteed);
  EXPECT_TRUE(bound.n_is_prime);
  EXPECT_FALSE(bound.bound_ok);  // needs N > 14
  ASSERT_FALSE(bound.reasons.empty());

  const auto colliding = sp::RealSignal::from_support(8, {0, 1, 2, 3}, {1.0, 2.0, 3.0, 4.0});
  const auto coll = sp::check_fmm_conditions(colliding, 29);
  EXPECT_EQ(coll.verdict, sp::FmmVerdict::NotGuaranteed);
  EXPECT_FALSE(coll.collision_free);

  const auto nonprime = sp::check_fmm_conditions(x2, 8);
  EXPECT_EQ(nonprime.verdict, sp::FmmVerdict::NotGuaranteed);
  EXPECT_FALSE(nonprime.n_is_prime);
}

TEST(FmmConditions, SparsitySixCorner) {
  // Collision-free 6-element support (Sidon set), all values equal.
  const std::vector<int> sidon6 = {0, 1, 4, 10, 12, 17};
  const auto equal =
      sp::RealSignal::from_support(18, sidon6, {2.0, 2.0, 2.0, 2.0, 2.0, 2.0});
  const auto report = sp::check_fmm_conditions(equal, 67);
  EXPECT_EQ(report.k6_case, sp::K6Case::K6AllEqual);
  EXPECT_EQ(report.verdict, sp::FmmVerdict::UniqueAlmostSurely);
  EXPECT_TRUE(report.reasons.empty());

  const auto distinct =
      sp::RealSignal::from_support(18, sidon6, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  const auto report2 = sp::check_fmm_conditions(distinct, 67);
  EXPECT_EQ(report2.k6_case, sp::K6Case::K6DistinctValues);
  EXPECT_EQ(report2.verdict, sp::FmmVerdict::Unique);
}

TEST(Arrangement, RoundTripAndPinnedZero) {
  const auto a = sp::autocorrelation(sp::RealSignal({1.0, 0.0, 2.0, 0.0}));
  const auto q = sp::PaddedAutocorrArrangement::from_autocorrelation(a);
  EXPECT_EQ(q.q, (std::vector<double>{5.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0, 0.0}));
  EXPECT_EQ(q.signal_length(), 4);
  EXPECT_EQ(q.nonzero_count(), 3);
  EXPECT_TRUE(q.is_symmetric(0.0));
  expect_autocorr_equal(q.to_autocorrelation(), a, 0.0);
}

TEST(RecoverAutocorr, PlantedSparseArrangement) {
  const sp::RealSignal x0({1.0, 0.0, 2.0, 0.0});
  const auto freqs = all_freqs(7);
  const auto y = fourier_measurements(x0, freqs);
  const auto rec = sp::recover_autocorrelation(y, freqs, 4, 7);
  EXPECT_EQ(rec.sparsity_found, 3);
  EXPECT_TRUE(rec.unique);
  EXPECT_TRUE(rec.symmetric);
  EXPECT_TRUE(rec.uniqueness_hypothesis_ok);
  const std::vector<double> expected = {5.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0, 0.0};
  ASSERT_EQ(rec.q.q.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(rec.q.q[i], expected[i], 1e-9);
  }

  sp::AutocorrRecoveryOptions sym;
  sym.exploit_symmetry = true;
  const auto rec2 = sp::recover_autocorrelation(y, freqs, 4, 7, sym);
  EXPECT_EQ(rec2.sparsity_found, 3);
  EXPECT_TRUE(rec2.symmetric);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(rec2.q.q[i], expected[i], 1e-9);
  }
}

TEST(RecoverAutocorr, ZeroMeasurements) {
  sp::IntensityMeasurements y;
  y.values = {0.0, 0.0, 0.0};
  const auto rec = sp::recover_autocorrelation(y, {0, 1, 2}, 3, 5);
  EXPECT_EQ(rec.sparsity_found, 0);
  EXPECT_EQ(rec.q.nonzero_count(1e-12), 0);
  EXPECT_TRUE(rec.unique);
}

TEST(RecoverAutocorr, UndersampledInstanceFlagsNonUniqueness) {
  // Two frequencies cannot pin three nonzero entries: both 2-sparse
  // arrangements below satisfy the equations, and the symmetric mode finds
  // the centro-symmetric 3-sparse one.
  sp::IntensityMeasurements y;
  y.values = {9.0, 1.0};  // from x = [2, 1]
  const std::vector<int> freqs = {0, 2};
  const auto rec = sp::recover_autocorrelation(y, freqs, 2, 3);
  EXPECT_EQ(rec.sparsity_found, 2);
  EXPECT_FALSE(rec.unique);
  EXPECT_FALSE(rec.symmetric);
  EXPECT_FALSE(rec.uniqueness_hypothesis_ok);
  ASSERT_EQ(rec.alternates.size(), 1u);
  const std::vector<double> first = {5.0, 4.0, 0.0, 0.0};
  const std::vector<double> second = {5.0, 0.0, 0.0, 4.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(rec.q.q[static_cast<std::size_t>(i)], first[static_cast<std::size_t>(i)], 1e-9);
    EXPECT_NEAR(rec.alternates[0].q[static_cast<std::size_t>(i)],
                second[static_cast<std::size_t>(i)], 1e-9);
  }

  sp::AutocorrRecoveryOptions sym;
  sym.exploit_symmetry = true;
  const auto rec2 = sp::recover_autocorrelation(y, freqs, 2, 3, sym);
  EXPECT_EQ(rec2.sparsity_found, 3);
  EXPECT_TRUE(rec2.unique);
  EXPECT_TRUE(rec2.symmetric);
  const std::vector<double> symq = {5.0, 2.0, 0.0, 2.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(rec2.q.q[static_cast<std::size_t>(i)], symq[static_cast<std::size_t>(i)], 1e-9);
  }
}

TEST(RecoverAutocorr, ThrowsWhenNothingFits) {
  sp::IntensityMeasurements y;
  y.values = {0.0, 5.0};
  EXPECT_THROW(sp::recover_autocorrelation(y, {0, 1}, 2, 1), sp::NoSolutionError);
}

TEST(RecoverAutocorr, ModesAgreeOnWellPosedInstances) {
  sp::CounterRng rng(71, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 5;
    const int k = 2;
    const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
    const auto freqs = all_freqs(7);
    const auto y = fourier_measurements(x0, freqs);
    const int s_max = k * k - k + 1;
    const auto plain = sp::recover_autocorrelation(y, freqs, m, s_max);
    sp::AutocorrRecoveryOptions sym;
    sym.exploit_symmetry = true;
    const auto fast = sp::recover_autocorrelation(y, freqs, m, s_max, sym);
    ASSERT_EQ(plain.sparsity_found, fast.sparsity_found);
    for (std::size_t i = 0; i < plain.q.q.size(); ++i) {
      EXPECT_NEAR(plain.q.q[i], fast.q.q[i], 1e-8 * std::max(1.0, std::fabs(plain.q.q[i])));
    }
  }
}

TEST(SignalFromAutocorr, TwoSparseClosedForm) {
  const auto a = sp::autocorrelation(sp::RealSignal({1.0, 0.0, 2.0}));
  const auto result = sp::signal_from_autocorrelation(a, 2);
  EXPECT_FALSE(result.multiple);
  EXPECT_TRUE(result.alternates.empty());
  EXPECT_TRUE(sp::equivalent_under_invariances(result.canonical, sp::RealSignal({1.0, 0.0, 2.0}),
                                               sp::InvarianceGroup::Full));
  expect_autocorr_equal(sp::autocorrelation(result.canonical), a, 1e-9);
}

TEST(SignalFromAutocorr, CanonicalRepresentativePreservesAutocorrelation) {
  const auto a = sp::autocorrelation(sp::RealSignal({1.0, 0.0, 2.0, 0.0}));
  const auto result = sp::signal_from_autocorrelation(a, 2);
  EXPECT_FALSE(result.multiple);
  EXPECT_TRUE(sp::equivalent_under_invariances(
      result.canonical, sp::RealSignal({1.0, 0.0, 2.0, 0.0}), sp::InvarianceGroup::Full));
  // The representative is drawn from the autocorrelation-preserving subgroup,
  // so its autocorrelation matches exactly, not just up to the orbit.
  expect_autocorr_equal(sp::autocorrelation(result.canonical), a, 1e-9);
  // Lexicographically smallest such representative: [-2, 0, -1, 0].
  EXPECT_NEAR(result.canonical[0], -2.0, 1e-9);
  EXPECT_NEAR(result.canonical[2], -1.0, 1e-9);
}

TEST(SignalFromAutocorr, OneSparseAndZeroCases) {
  const auto a1 = sp::autocorrelation(sp::RealSignal({0.0, 2.0, 0.0}));
  const auto r1 = sp::signal_from_autocorrelation(a1, 1);
  EXPECT_EQ(r1.canonical.sparsity(), 1);
  EXPECT_TRUE(sp::equivalent_under_invariances(r1.canonical, sp::RealSignal({0.0, 2.0, 0.0}),
                                               sp::InvarianceGroup::Full));

  const auto a0 = sp::autocorrelation(sp::RealSignal::zeros(3));
  EXPECT_EQ(sp::signal_from_autocorrelation(a0, 2).canonical.sparsity(), 0);

  EXPECT_THROW(sp::signal_from_autocorrelation(a1, 0), sp::NoSolutionError);
  EXPECT_THROW(sp::signal_from_autocorrelation(a1, 2), sp::NoSolutionError);
}

TEST(SignalFromAutocorr, RejectsImpossibleInputs) {
  EXPECT_THROW(sp::signal_from_autocorrelation(sp::Autocorrelation({1.0, 5.0, 2.0}), 2),
               std::invalid_argument);
  EXPECT_THROW(sp::signal_from_autocorrelation(sp::Autocorrelation({-1.0}), 1),
               sp::NoSolutionError);
  const auto a = sp::autocorrelation(sp::RealSignal({1.0, 0.0, 2.0}));
  EXPECT_THROW(sp::signal_from_autocorrelation(a, 7), std::invalid_argument);
  // k exceeding the support spread + 1 cannot place k distinct entries.
  const auto spread = sp::autocorrelation(sp::RealSignal({1.0, 0.0, 2.0, 0.0, 0.0}));
  EXPECT_THROW(sp::signal_from_autocorrelation(spread, 4), sp::NoSolutionError);
  // k >= 2 with no nonzero positive lag is impossible: the outermost product
  // never cancels.
  const auto single = sp::autocorrelation(sp::RealSignal({3.0, 0.0, 0.0}));
  EXPECT_THROW(sp::signal_from_autocorrelation(single, 2), sp::NoSolutionError);
}

TEST(SignalFromAutocorr, NonSidonSupportViaGaussNewton) {
  const sp::RealSignal x0({1.0, 2.0, 3.0});
  const auto result = sp::signal_from_autocorrelation(sp::autocorrelation(x0), 3);
  EXPECT_FALSE(result.multiple);
  EXPECT_TRUE(sp::equivalent_under_invariances(result.canonical, x0, sp::InvarianceGroup::Full));
  expect_autocorr_equal(sp::autocorrelation(result.canonical), sp::autocorrelation(x0), 1e-7);
}

TEST(SignalFromAutocorr, CollidingSupportStillInvertible) {
  // Support {0,1,3,4} collides (two disjoint pairs at difference 1); the
  // sign-pattern search plus the global gate still find the orbit.
  const auto x0 = sp::RealSignal::from_support(5, {0, 1, 3, 4}, {2.0, 3.0, 1.0, 1.0});
  const auto a = sp::autocorrelation(x0);
  const auto result = sp::signal_from_autocorrelation(a, 4);
  bool found = sp::equivalent_under_invariances(result.canonical, x0, sp::InvarianceGroup::Full);
  for (const auto& alt : result.alternates) {
    found = found || sp::equivalent_under_invariances(alt, x0, sp::InvarianceGroup::Full);
  }
  EXPECT_TRUE(found);
  expect_autocorr_equal(sp::autocorrelation(result.canonical), a, 1e-7);
  for (const auto& alt : result.alternates) {
    expect_autocorr_equal(sp::autocorrelation(alt), a, 1e-7);
  }
}

TEST(SignalFromAutocorr, RandomSidonRoundTrips) {
  sp::CounterRng rng(73, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 9;
    const int k = 3;
    const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
    const auto result = sp::signal_from_autocorrelation(sp::autocorrelation(x0), k);
    EXPECT_TRUE(
        sp::equivalent_under_invariances(result.canonical, x0, sp::InvarianceGroup::Full))
        << "trial " << trial;
    EXPECT_FALSE(result.multiple);
  }
}

TEST(SignalFromAutocorr, HomometricPairReportsMultiplicity) {
  // Two Sidon supports with identical difference sets and equal values have
  // the same autocorrelation but inequivalent orbits.
  const std::vector<int> s1 = {0, 1, 4, 10, 12, 17};
  const std::vector<int> s2 = {0, 1, 8, 11, 13, 17};
  const std::vector<double> ones(6, 1.0);
  const auto x1 = sp::RealSignal::from_support(18, s1, ones);
  const auto x2 = sp::RealSignal::from_support(18, s2, ones);
  const auto a1 = sp::autocorrelation(x1);
  const auto a2 = sp::autocorrelation(x2);
  expect_autocorr_equal(a1, a2, 0.0);
  ASSERT_FALSE(sp::equivalent_under_invariances(x1, x2, sp::InvarianceGroup::Full));

  const auto result = sp::signal_from_autocorrelation(a1, 6);
  EXPECT_TRUE(result.multiple);
  EXPECT_FALSE(result.warnings.empty());  // k = 6 bypasses the cap with a warning
  std::vector<sp::RealSignal> reps;
  reps.push_back(result.canonical);
  for (const auto& alt : result.alternates) reps.push_back(alt);
  ASSERT_GE(reps.size(), 2u);
  bool has1 = false;
  bool has2 = false;
  for (const auto& rep : reps) {
    expect_autocorr_equal(sp::autocorrelation(rep), a1, 1e-8);
    has1 = has1 || sp::equivalent_under_invariances(rep, x1, sp::InvarianceGroup::Full);
    has2 = has2 || sp::equivalent_under_invariances(rep, x2, sp::InvarianceGroup::Full);
  }
  EXPECT_TRUE(has1);
  EXPECT_TRUE(has2);
}

TEST(SignalFromAutocorr, CapsGovernLargeInstances) {
  sp::CounterRng rng(79, 0);
  // k = 7 exceeds the sparsity cap outright (only k = 6 may bypass it).
  const auto x7 = sp::random_collision_free_integer_signal(40, 7, rng);
  EXPECT_THROW(sp::signal_from_autocorrelation(sp::autocorrelation(x7), 7),
               sp::CapExceededError);
  // Small k with a tight support cap trips the enumeration guard instead.
  const auto x4 = sp::random_collision_free_integer_signal(30, 4, rng);
  sp::SignalFromAutocorrOptions opts;
  opts.support_cap = 5;
  EXPECT_THROW(sp::signal_from_autocorrelation(sp::autocorrelation(x4), 4, opts),
               sp::CapExceededError);
}

TEST(FmmRecover, KnownFiveSampleSignal) {
  const sp::RealSignal x0({0.0, 3.0, 0.0, 0.0, -1.0});
  const auto freqs = all_freqs(7);
  const auto y = fourier_measurements(x0, freqs);
  const auto report = sp::fmm_recover(y, freqs, 5, 2);
  EXPECT_TRUE(
      sp::equivalent_under_invariances(report.solution, x0, sp::InvarianceGroup::Full));
  EXPECT_TRUE(report.alternates.empty());
  EXPECT_FALSE(report.signal_multiple);
  EXPECT_TRUE(report.autocorr.uniqueness_hypothesis_ok);
  EXPECT_EQ(report.conditions.verdict, sp::FmmVerdict::Unique);
  EXPECT_LE(report.residual, 1e-8 * y.l2_norm());
  EXPECT_TRUE(report.warnings.empty());
}

TEST(FmmRecover, NonPrimeCountCompletesWithWarning) {
  const sp::RealSignal x0({0.0, 3.0, 0.0, 0.0, -1.0});
  const auto freqs = all_freqs(6);
  const auto y = fourier_measurements(x0, freqs);
  const auto report = sp::fmm_recover(y, freqs, 5, 2);
  EXPECT_TRUE(
      sp::equivalent_under_invariances(report.solution, x0, sp::InvarianceGroup::Full));
  EXPECT_FALSE(report.autocorr.uniqueness_hypothesis_ok);
  EXPECT_EQ(report.conditions.verdict, sp::FmmVerdict::NotGuaranteed);
  EXPECT_FALSE(report.warnings.empty());
}

TEST(FmmRecover, ZeroSignal) {
  const auto freqs = all_freqs(7);
  const auto y = fourier_measurements(sp::RealSignal::zeros(5), freqs);
  const auto report = sp::fmm_recover(y, freqs, 5, 2);
  EXPECT_EQ(report.solution.sparsity(), 0);
  EXPECT_LE(report.residual, 1e-12);
}

TEST(FmmRecover, InvariantUnderNonWrappingActions) {
  const sp::RealSignal x0 = sp::RealSignal::from_support(7, {1, 3}, {2.0, -1.0});
  const auto freqs = all_freqs(7);
  const auto base = sp::fmm_recover(fourier_measurements(x0, freqs), freqs, 7, 2);
  for (const sp::InvarianceAction& g :
       {sp::InvarianceAction{-1, false, 2}, sp::InvarianceAction{+1, true, 1}}) {
    ASSERT_TRUE(sp::is_non_wrapping(g, x0));
    const auto moved = sp::fmm_recover(fourier_measurements(sp::apply(g, x0), freqs), freqs, 7, 2);
    ASSERT_EQ(moved.solution.size(), base.solution.size());
    for (int i = 0; i < base.solution.size(); ++i) {
      EXPECT_NEAR(moved.solution[i], base.solution[i], 1e-9);
    }
  }
}

TEST(FmmRecover, RandomRoundTrips) {
  sp::CounterRng rng(83, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 9;
    const int k = 3;
    const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
    const auto freqs = all_freqs(17);
    const auto y = fourier_measurements(x0, freqs);
    const auto report = sp::fmm_recover(y, freqs, m, k);
    EXPECT_TRUE(
        sp::equivalent_under_invariances(report.solution, x0, sp::InvarianceGroup::Full))
        << "trial " << trial;
    EXPECT_EQ(report.conditions.verdict, sp::FmmVerdict::Unique);
  }
}
