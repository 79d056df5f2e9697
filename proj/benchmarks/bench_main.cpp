#include "bsp/correlation.hpp"
#include "bsp/dataset.hpp"
#include "bsp/network.hpp"
#include "bsp/random.hpp"
#include "bsp/search.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

Eigen::MatrixXd gaussian(bsp::Index rows, bsp::Index cols, bsp::Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (bsp::Index j = 0; j < cols; ++j)
    for (bsp::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

bsp::TwoViewDataset dataset(bsp::Index n, bsp::Index p, bsp::Index q) {
  bsp::Rng rng(1);
  return bsp::standardize(bsp::TwoViewDataset(gaussian(n, p, rng), gaussian(n, q, rng)));
}

bsp::FeatureSet first(bsp::View view, bsp::Index count) {
  std::vector<bsp::Index> idx(static_cast<std::size_t>(count));
  for (bsp::Index i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = i;
  return bsp::FeatureSet(view, idx);
}

void BM_R2Profile(benchmark::State& state) {
  const auto d = dataset(200, 2000, 20000);
  const auto set = first(bsp::View::TypeOne, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bsp::r2_profile(d, set));
  state.SetItemsProcessed(state.iterations() * d.q());
}
BENCHMARK(BM_R2Profile)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_HalfUpdate(benchmark::State& state) {
  const auto d = dataset(200, 2000, 20000);
  const auto set = first(bsp::View::TypeOne, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bsp::half_update(d, set, 0.05));
  state.SetItemsProcessed(state.iterations() * d.q());
}
BENCHMARK(BM_HalfUpdate)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ConnectivityThreshold(benchmark::State& state) {
  bsp::Rng rng(2);
  const Eigen::MatrixXd corr = gaussian(state.range(0), state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(bsp::connectivity_threshold(corr));
  state.SetItemsProcessed(state.iterations() * corr.size());
}
BENCHMARK(BM_ConnectivityThreshold)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ConnectivityThresholdStreaming(benchmark::State& state) {
  bsp::Rng rng(3);
  const Eigen::MatrixXd corr = gaussian(1000, 1000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bsp::connectivity_threshold(corr, 100000));
  state.SetItemsProcessed(state.iterations() * corr.size());
}
BENCHMARK(BM_ConnectivityThresholdStreaming)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
