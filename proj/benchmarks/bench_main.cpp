#include <benchmark/benchmark.h>

#include <random>

#include "novelty/depth_analysis.hpp"
#include "novelty/forest.hpp"
#include "novelty/reference_data.hpp"

using namespace novelty;

namespace {

std::vector<DataPoint> gaussian(std::size_t n, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<DataPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> c(dims);
    for (double& x : c) x = g(gen);
    out.emplace_back(std::move(c));
  }
  return out;
}

void BM_FitForest(benchmark::State& state) {
  const auto data = gaussian(4096, 8, 1);
  ForestConfig cfg;
  cfg.algorithm = static_cast<Algorithm>(state.range(0));
  cfg.n_trees = 100;
  cfg.subsample_size = 256;
  for (auto _ : state) benchmark::DoNotOptimize(fit(cfg, data));
  state.SetLabel(to_string(cfg.algorithm));
}
BENCHMARK(BM_FitForest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ScoreForest(benchmark::State& state) {
  const auto data = gaussian(4096, 8, 2);
  const auto probes = gaussian(1024, 8, 3);
  ForestConfig cfg;
  cfg.algorithm = static_cast<Algorithm>(state.range(0));
  cfg.n_trees = 100;
  cfg.subsample_size = 256;
  cfg.root_rect_policy = PaddedRoot{0.5};
  const Forest f = fit(cfg, data);
  for (auto _ : state) benchmark::DoNotOptimize(score(f, probes));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(probes.size()));
  state.SetLabel(to_string(cfg.algorithm));
}
BENCHMARK(BM_ScoreForest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExactOriginal(benchmark::State& state) {
  const auto s = reference::sample();
  for (auto _ : state) benchmark::DoNotOptimize(exact_original(s, DataPoint{25, 85}));
}
BENCHMARK(BM_ExactOriginal)->Unit(benchmark::kMillisecond);

void BM_ExactOriginalRandom(benchmark::State& state) {
  const auto s = gaussian(static_cast<std::size_t>(state.range(0)), 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(exact_original(s, s.front()));
}
BENCHMARK(BM_ExactOriginalRandom)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ExactHst(benchmark::State& state) {
  const auto s = reference::sample();
  const Hyperrectangle root = reference::analysis_root_rect();
  for (auto _ : state) benchmark::DoNotOptimize(exact_hst(s, root, DataPoint{25, 85}));
}
BENCHMARK(BM_ExactHst);

void BM_MonteCarlo(benchmark::State& state) {
  const auto s = reference::sample();
  MonteCarloOptions opts;
  opts.algorithm = static_cast<Algorithm>(state.range(0));
  opts.root_rect = reference::analysis_root_rect();
  opts.trials = 10000;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(s, DataPoint{25, 85}, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(opts.trials));
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
