#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gefrfe/pipeline.hpp"
#include "gefrfe/random_graphs.hpp"
#include "gefrfe/selection.hpp"

using namespace gefrfe;

namespace {

const LabeledDataset& dataset() {
  static const LabeledDataset data = [] {
    std::mt19937_64 rng(42);
    LabeledDataset d;
    d.name = "bench";
    for (int i = 0; i < 300; ++i) {
      const int n = 10 + static_cast<int>(rng() % 31);
      d.graphs.push_back(random_connected_graph(n, 0.15, rng));
      d.labels.push_back(i % 3);
    }
    return d;
  }();
  return data;
}

const SpectralDataset& spectra() {
  static const SpectralDataset s = serial::prepare(dataset());
  return s;
}

std::vector<FeatureSpec> specs() { return feature_grid(default_filter_bank(), std::vector<int>{0, 1, 2, 3, 4, 5}, 0.54); }

const Eigen::MatrixXd& rows() {
  static const Eigen::MatrixXd r = serial::embed(spectra(), specs()).rows;
  return r;
}

const Eigen::MatrixXd& distances() {
  static const Eigen::MatrixXd d = serial::pairwise_sq_distances(rows());
  return d;
}

void BM_PrepareSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::prepare(dataset()));
}
void BM_PrepareParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(prepare(dataset()));
}
void BM_EmbedSerial(benchmark::State& st) {
  const auto s = specs();
  for (auto _ : st) benchmark::DoNotOptimize(serial::embed(spectra(), s));
}
void BM_EmbedParallel(benchmark::State& st) {
  const auto s = specs();
  for (auto _ : st) benchmark::DoNotOptimize(embed(spectra(), s));
}
void BM_DistancesSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::pairwise_sq_distances(rows()));
}
void BM_DistancesParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(pairwise_sq_distances(rows()));
}
void BM_CrossValidateSerial(benchmark::State& st) {
  const EvalConfig cfg{5, 5, 20, 1};
  for (auto _ : st) benchmark::DoNotOptimize(serial::cross_validate_distances(distances(), dataset().labels, cfg));
}
void BM_CrossValidateParallel(benchmark::State& st) {
  const EvalConfig cfg{5, 5, 20, 1};
  for (auto _ : st) benchmark::DoNotOptimize(cross_validate_distances(distances(), dataset().labels, cfg));
}

}  // namespace

BENCHMARK(BM_PrepareSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrepareParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EmbedSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmbedParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DistancesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistancesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CrossValidateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
