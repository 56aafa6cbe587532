#include <benchmark/benchmark.h>

#include <vector>

#include "rnm/analysis.hpp"
#include "rnm/cpt_generator.hpp"
#include "rnm/truncnorm.hpp"

namespace {

void BM_PartitionMasses(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const rnm::CellPartition partition(m, 0.004);
  std::vector<double> out(static_cast<std::size_t>(m));
  double mean = 0.0;
  for (auto _ : state) {
    partition.masses(mean, out);
    benchmark::DoNotOptimize(out.data());
    mean = mean > 1.0 ? 0.0 : mean + 0.001;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PartitionMasses)->Arg(3)->Arg(7)->Arg(20);

// One scenario column: s^n combinations through the whole pipeline.
void BM_GenerateDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int s = static_cast<int>(state.range(1));
  const auto fragment = rnm::RankedFragment::equal_m(n, 5);
  const auto spec = rnm::WeightExpressionSpec::wmean(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
  const auto config = rnm::scenario_d(1, fragment);
  const rnm::GenerationParams params(0.004, s);
  for (auto _ : state) benchmark::DoNotOptimize(rnm::generate_distribution(spec, fragment, config, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rnm::combination_count(s, n)));
}
BENCHMARK(BM_GenerateDistribution)->Args({2, 5})->Args({4, 5})->Args({8, 5})->Args({4, 10})->Unit(benchmark::kMicrosecond);

void BM_GenerateCpt(benchmark::State& state) {
  const auto fragment = rnm::RankedFragment::equal_m(3, 5);
  const auto spec = rnm::WeightExpressionSpec::wmin({1.0, 2.0, 4.0});
  const rnm::GenerationParams params(0.01, 5);
  for (auto _ : state) benchmark::DoNotOptimize(rnm::generate_cpt(spec, fragment, params));
}
BENCHMARK(BM_GenerateCpt)->Unit(benchmark::kMillisecond);

void BM_BisectWmax(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rnm::bisect_wmax(1, 4, 5, 4, 0.01, 3));
}
BENCHMARK(BM_BisectWmax)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
