#include <benchmark/benchmark.h>

#include <random>

#include "haarboost/engine.hpp"

using namespace haarboost;

namespace {

Image noise(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> px(kWindow * kWindow);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng());
  return Image(kWindow, kWindow, std::move(px));
}

const Dataset& bench_data() {
  static const Dataset d = synth(7, 100, 100);
  return d;
}

void BM_IntegralImage(benchmark::State& state) {
  const Image img = noise(1);
  for (auto _ : state) benchmark::DoNotOptimize(integral_of(img));
}
BENCHMARK(BM_IntegralImage);

void BM_RectSum(benchmark::State& state) {
  const IntegralImage ii = integral_of(noise(2));
  int i = 0;
  for (auto _ : state) {
    const int x = i % 12;
    benchmark::DoNotOptimize(rect_sum(ii, {x, x, 12, 12}));
    ++i;
  }
}
BENCHMARK(BM_RectSum);

void BM_KernelApply(benchmark::State& state) {
  const FeatureTable& table = standard_features();
  const IntegralImage ii = integral_of(noise(3));
  std::uint32_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.kernel(i).apply(ii.sums().data()));
    i = (i + 7919) % table.size();
  }
}
BENCHMARK(BM_KernelApply);

void BM_TrainStump(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::vector<double> values(n);
  std::vector<std::uint8_t> labels(n);
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = static_cast<double>(rng() % 10000);
    labels[i] = static_cast<std::uint8_t>(rng() & 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(train_stump(values, labels, weights));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TrainStump)->Arg(200)->Arg(2000);

void BM_BestOverRange(benchmark::State& state) {
  const Dataset& d = bench_data();
  const WeightVector w = normalize(init_weights(d.stats()));
  const auto count = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(best_over_range({0, count}, d, w));
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_BestOverRange)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ParallelBest(benchmark::State& state) {
  const Dataset& d = bench_data();
  const WeightVector w = normalize(init_weights(d.stats()));
  const auto budget = static_cast<std::size_t>(state.range(0));
  const auto part = partition(40000, PartitionScheme::ByChunk, budget);
  for (auto _ : state) benchmark::DoNotOptimize(parallel_best(part, d, w, budget));
  state.SetItemsProcessed(state.iterations() * 40000);
}
BENCHMARK(BM_ParallelBest)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
