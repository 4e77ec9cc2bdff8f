// Microbenchmarks for the hot paths: autocorrelation, complement checks,
// lifted recovery, and both stages of the Fourier-magnitude pipeline.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "sparsephase/complement.hpp"
#include "sparsephase/ensemble.hpp"
#include "sparsephase/fmm.hpp"
#include "sparsephase/lifted.hpp"
#include "sparsephase/rng.hpp"
#include "sparsephase/signal.hpp"

namespace sp = sparsephase;

namespace {

std::vector<int> all_freqs(int n) {
  std::vector<int> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), 0);
  return f;
}

void bm_autocorrelation(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  sp::CounterRng rng(7, 0);
  const sp::RealSignal x = sp::random_sparse_signal(m, m / 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::autocorrelation(x));
  }
}
BENCHMARK(bm_autocorrelation)->Arg(64)->Arg(256);

void bm_canonicalize(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  sp::CounterRng rng(11, 0);
  const sp::RealSignal x = sp::random_sparse_signal(m, m / 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::canonicalize(x));
  }
}
BENCHMARK(bm_canonicalize)->Arg(16)->Arg(64);

void bm_gaussian_ensemble(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::MeasurementEnsemble::gaussian(m, 2 * m - 1, 3));
  }
}
BENCHMARK(bm_gaussian_ensemble)->Arg(8)->Arg(32);

void bm_complement_check(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto phi = sp::MeasurementEnsemble::gaussian(m, 2 * m - 1, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::has_complement_property(phi));
  }
}
BENCHMARK(bm_complement_check)->Arg(4)->Arg(6);

void bm_k_complement_check(benchmark::State& state) {
  const int m = 8;
  const int k = static_cast<int>(state.range(0));
  const auto phi = sp::MeasurementEnsemble::gaussian(m, 2 * k - 1, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::has_k_complement_property(phi, k));
  }
}
BENCHMARK(bm_k_complement_check)->Arg(2)->Arg(4);

void bm_l0_recover(benchmark::State& state) {
  const int m = 8;
  const int k = static_cast<int>(state.range(0));
  const auto phi = sp::MeasurementEnsemble::gaussian(m, 4 * k - 1, 9);
  sp::CounterRng rng(13, 0);
  const sp::RealSignal x0 = sp::random_sparse_signal(m, k, rng);
  const auto y = sp::intensity_measure(phi, x0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::l0_recover(phi, y, k));
  }
}
BENCHMARK(bm_l0_recover)->Arg(2)->Arg(3);

void bm_recover_autocorrelation(benchmark::State& state) {
  const int m = 9;
  const int k = 3;
  const int n = 17;
  const bool symmetric = state.range(0) != 0;
  sp::CounterRng rng(21, 0);
  const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
  const auto freqs = all_freqs(n);
  const auto phi = sp::MeasurementEnsemble::fourier(m, freqs);
  const auto y = sp::intensity_measure(phi, x0);
  sp::AutocorrRecoveryOptions opts;
  opts.exploit_symmetry = symmetric;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sp::recover_autocorrelation(y, freqs, m, k * k - k + 1, opts));
  }
}
BENCHMARK(bm_recover_autocorrelation)->Arg(0)->Arg(1);

void bm_signal_from_autocorrelation(benchmark::State& state) {
  const int m = 16;
  const int k = static_cast<int>(state.range(0));
  sp::CounterRng rng(23, 0);
  const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
  const auto a = sp::autocorrelation(x0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::signal_from_autocorrelation(a, k));
  }
}
BENCHMARK(bm_signal_from_autocorrelation)->Arg(3)->Arg(4);

void bm_fmm_recover(benchmark::State& state) {
  const int m = 9;
  const int k = 3;
  const int n = sp::next_valid_N(k);
  sp::CounterRng rng(29, 0);
  const sp::RealSignal x0 = sp::random_collision_free_integer_signal(m, k, rng);
  const auto freqs = all_freqs(n);
  const auto phi = sp::MeasurementEnsemble::fourier(m, freqs);
  const auto y = sp::intensity_measure(phi, x0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::fmm_recover(y, freqs, m, k));
  }
}
BENCHMARK(bm_fmm_recover);

}  // namespace

BENCHMARK_MAIN();
