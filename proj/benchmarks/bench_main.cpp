#include <benchmark/benchmark.h>

#include "mbrisk/hitting.hpp"
#include "mbrisk/lagrange.hpp"
#include "mbrisk/montecarlo.hpp"
#include "mbrisk/risk_model.hpp"
#include "mbrisk/ruin.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace mbrisk;

void BM_LagrangeLevels(benchmark::State& state) {
  const ModelSpec spec = testing::random_model(static_cast<std::size_t>(state.range(0)), 2, 20240607);
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(lagrange_levels(spec.claims, Acting::kRight, n));
}
BENCHMARK(BM_LagrangeLevels)->Args({2, 6})->Args({3, 4})->Args({3, 6})->Unit(benchmark::kMillisecond);

void BM_DpLevels(benchmark::State& state) {
  const ModelSpec spec = testing::random_model(3, 2, 20240607);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dp_Q_levels(spec, n));
}
BENCHMARK(BM_DpLevels)->Arg(6)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_SealSurvival(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    // Fresh model each round so the convolution and V caches are rebuilt.
    const RiskModel model(testing::random_model(3, 2, 20240607));
    benchmark::DoNotOptimize(seal_survival(model, 3, n));
  }
}
BENCHMARK(BM_SealSurvival)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ConstrainedSurvival(benchmark::State& state) {
  const RiskModel model(testing::random_model(3, 2, 20240607));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(constrained_survival(model, 3, n));
}
BENCHMARK(BM_ConstrainedSurvival)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_LundbergG(benchmark::State& state) {
  const ModelSpec spec = testing::random_model(3, 2, 20240607);
  for (auto _ : state) benchmark::DoNotOptimize(lundberg_G(spec, 0.9));
}
BENCHMARK(BM_LundbergG)->Unit(benchmark::kMicrosecond);

void BM_SimulateSurvival(benchmark::State& state) {
  const RiskModel model(testing::m2());
  SimConfig cfg;
  cfg.paths = static_cast<std::size_t>(state.range(0));
  cfg.horizon = 5;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_survival_curve(model, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateSurvival)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
