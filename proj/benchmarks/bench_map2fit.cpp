#include "map2fit/map2fit.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace map2fit;

namespace {

const CanonicalMap2 example{Form::One, -0.5, 0.2, -2.0, 1.3};

std::vector<double> sample(std::size_t n) {
  return simulate(canonical_to_matrices(example), n, SimulationStart::stationary(), 1).times;
}

void BM_expm(benchmark::State &state) {
  const Matrix2 m{-3.0, 1.0, 0.5, -0.8};
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(m, t));
    t = t < 10.0 ? t * 1.01 : 0.1;
  }
}
BENCHMARK(BM_expm);

void BM_loglik(benchmark::State &state) {
  const auto t = sample(static_cast<std::size_t>(state.range(0)));
  const RateMatrixPair m = canonical_to_matrices(example);
  for (auto _ : state)
    benchmark::DoNotOptimize(loglik(m, t).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_loglik)->Arg(100)->Arg(1000)->Arg(10000);

void BM_simulate(benchmark::State &state) {
  const RateMatrixPair m = canonical_to_matrices(example);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate(m, n, SimulationStart::stationary(), 3).times.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate)->Arg(1000)->Arg(100000);

void BM_moments_match_start(benchmark::State &state) {
  const MomentSummary target = matching_target(sample(1000));
  EstimationConfig config;
  config.multistart_count = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(moments_match_start(target, Form::One, config).x);
}
BENCHMARK(BM_moments_match_start)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_fit(benchmark::State &state) {
  const auto t = sample(static_cast<std::size_t>(state.range(0)));
  EstimationConfig config;
  config.multistart_count = 20;
  for (auto _ : state)
    benchmark::DoNotOptimize(fit(t, config).loglik.value);
}
BENCHMARK(BM_fit)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
