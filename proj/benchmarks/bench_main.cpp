#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mvmc/graph_learning.hpp"
#include "mvmc/louvain.hpp"
#include "mvmc/mvmc.hpp"
#include "mvmc/stability.hpp"
#include "mvmc/weighted_graph.hpp"

namespace {

// Planted blocks of 10 with dense strong links inside and sparse weak ones across.
mvmc::MultiViewGraphs Planted(int n, int views, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<mvmc::WeightedGraph> graphs;
  for (int v = 0; v < views; ++v) {
    mvmc::WeightedGraph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = i / 10 == j / 10;
        if (unit(rng) < (same ? 0.8 : 0.05)) g.AddEdge(i, j, same ? 0.9 : 0.1);
      }
    }
    graphs.push_back(std::move(g));
  }
  return mvmc::MultiViewGraphs(std::move(graphs));
}

Eigen::MatrixXd CountRows(int n, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> counts(3.0);
  Eigen::MatrixXd rows(n, cols);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) rows(i, j) = counts(rng);
  }
  return rows;
}

void BM_Louvain(benchmark::State& state) {
  const auto graphs = Planted(static_cast<int>(state.range(0)), 3, 1);
  const std::vector<double> ones(3, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvmc::Louvain(graphs, ones, ones, ++seed));
  }
}
BENCHMARK(BM_Louvain)->Arg(40)->Arg(160)->Arg(640);

void BM_Mvmc(benchmark::State& state) {
  const auto graphs = Planted(static_cast<int>(state.range(0)), 3, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvmc::Mvmc(graphs, {}, ++seed));
  }
}
BENCHMARK(BM_Mvmc)->Arg(40)->Arg(160);

void BM_PairwiseDistances(benchmark::State& state) {
  const auto rows = CountRows(static_cast<int>(state.range(0)), 12, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mvmc::learn::PairwiseDistances(rows, mvmc::learn::DistanceMetric::kEuclidean));
  }
}
BENCHMARK(BM_PairwiseDistances)->Arg(50)->Arg(200)->Arg(800);

void BM_LearnRbg(benchmark::State& state) {
  const auto d = mvmc::learn::PairwiseDistances(CountRows(static_cast<int>(state.range(0)), 12, 4),
                                                mvmc::learn::DistanceMetric::kEuclidean);
  for (auto _ : state) {
    const double radius = mvmc::learn::SelectRadius(d);
    benchmark::DoNotOptimize(mvmc::learn::BuildRbg(d, radius));
  }
}
BENCHMARK(BM_LearnRbg)->Arg(50)->Arg(200);

void BM_AdjustedRandIndex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<int> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<int>(rng() % 20);
    b[i] = static_cast<int>(rng() % 20);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvmc::stability::AdjustedRandIndex(a, b));
  }
}
BENCHMARK(BM_AdjustedRandIndex)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
