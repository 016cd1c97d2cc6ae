#include <benchmark/benchmark.h>

#include "kmu/kmeans.hpp"
#include "kmu/limit_law.hpp"
#include "kmu/metrics.hpp"
#include "kmu/models.hpp"
#include "kmu/uniqueness.hpp"

using namespace kmu;

static void BM_Objective(benchmark::State& state) {
  const Dataset data = sample(ModelSpec::make(Family::TC3k2), state.range(0), RngStream(1));
  const CenterSet centers = CenterSet::from_rows({{1.0, 0.0}, {-0.5, 0.0}});
  for (auto _ : state) benchmark::DoNotOptimize(objective(data, centers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Objective)->Arg(10000)->Arg(100000);

static void BM_FitUnique(benchmark::State& state) {
  const Dataset data = sample(ModelSpec::make(Family::C2k2_2), state.range(0), RngStream(2));
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, 2, 20, RngStream(3)).wcss);
}
BENCHMARK(BM_FitUnique)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_FitOrbit(benchmark::State& state) {
  const Dataset data = sample(ModelSpec::make(Family::C1k2), state.range(0), RngStream(4));
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, 2, 20, RngStream(5)).wcss);
}
BENCHMARK(BM_FitOrbit)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_FitHighDim(benchmark::State& state) {
  const Dataset data = sample(ModelSpec::make(Family::C3k3, 0.0, state.range(0)), 20000, RngStream(6));
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, 3, 5, RngStream(7)).wcss);
}
BENCHMARK(BM_FitHighDim)->Arg(2)->Arg(8)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_Bootstrap(benchmark::State& state) {
  const Dataset data = sample(ModelSpec::make(Family::TC3k2), 5000, RngStream(8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_draws(data, 2, state.range(0), 5, RngStream(9)).t_star);
  }
}
BENCHMARK(BM_Bootstrap)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_GromovHausdorff(benchmark::State& state) {
  const auto a = FiniteMetricCloud::from_rows({{0, 0}, {1, 0.2}, {0.3, 2}, {-1, 1}});
  const auto b = FiniteMetricCloud::from_rows({{0, 1}, {2, 0}, {0.5, -1}, {1, 1.5}});
  for (auto _ : state) benchmark::DoNotOptimize(gromov_hausdorff_small(a, b));
}
BENCHMARK(BM_GromovHausdorff);

static void BM_SimulateT(benchmark::State& state) {
  const auto cov = make_covariance(3, {1.0, 0.3, 0.1, 0.3, 1.0, 0.3, 0.1, 0.3, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(simulate_T(cov, 1 << 18, RngStream(10)).mean);
  state.SetItemsProcessed(state.iterations() * (1 << 18));
}
BENCHMARK(BM_SimulateT)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
