#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mvmc/mvmc.hpp"
#include "mvmc/stability.hpp"
#include "oracles.hpp"

using namespace mvmc;

namespace {

MultiViewGraphs TwoTriangles() {
  return MultiViewGraphs({fixtures::ToGraph(
      6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}})});
}

ThetaEstimate Theta(double in, double out) { return {in, out, false}; }

}  // namespace

TEST(EstimateThetas, TwoTrianglesComponentPartition) {
  const auto t = EstimateThetas(TwoTriangles(), std::vector<int>{0, 0, 0, 1, 1, 1});
  ASSERT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ(t[0].theta_in, 2.0);
  EXPECT_EQ(t[0].theta_out, kThetaFloor);
}

TEST(EstimateThetas, SingleClusterIsDegenerate) {
  const auto t = EstimateThetas(TwoTriangles(), std::vector<int>(6, 0));
  EXPECT_TRUE(t[0].degenerate);
  EXPECT_EQ(t[0].theta_out, kThetaFloor);
}

TEST(EstimateThetas, EdgelessViewIsNeutral) {
  const MultiViewGraphs mv({WeightedGraph(4)});
  const auto t = EstimateThetas(mv, std::vector<int>{0, 0, 1, 1});
  EXPECT_EQ(t[0].theta_in, kThetaFloor);
  EXPECT_EQ(t[0].theta_out, kThetaFloor);
}

TEST(EstimateThetas, RandomLabelsOnRandomGraphAreBalanced) {
  std::mt19937_64 rng(12);
  double total_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto edges = fixtures::RandomGraph(60, 0.15, rng);
    const MultiViewGraphs mv({fixtures::ToGraph(60, edges)});
    std::vector<int> labels(60);
    for (auto& l : labels) l = static_cast<int>(rng() % 3);
    const auto t = EstimateThetas(mv, labels);
    total_gap += t[0].theta_in - t[0].theta_out;
  }
  EXPECT_LT(std::abs(total_gap / 20.0), 0.1);
}

TEST(UpdateResolution, Examples) {
  EXPECT_NEAR(UpdateResolution(Theta(2.0, 0.5)), 1.5 / std::log(4.0), 1e-12);
  EXPECT_NEAR(UpdateResolution(Theta(2.0, 0.5)), 1.08202, 1e-5);
  EXPECT_DOUBLE_EQ(UpdateResolution(Theta(1.3, 1.3)), 1.3);
  const double clamped = UpdateResolution(Theta(2.0, kThetaFloor));
  EXPECT_TRUE(std::isfinite(clamped));
  EXPECT_NEAR(clamped, 2.0 / std::log(2.0 / kThetaFloor), 1e-9);
}

TEST(UpdateWeights, Examples) {
  const std::vector<ThetaEstimate> same{Theta(2, 0.5), Theta(2, 0.5), Theta(2, 0.5)};
  for (double w : UpdateWeights(same).weights) EXPECT_DOUBLE_EQ(w, 1.0);

  const std::vector<ThetaEstimate> two{Theta(std::exp(2.0), 1.0), Theta(std::exp(1.0), 1.0)};
  const auto w = UpdateWeights(two);
  EXPECT_NEAR(w.weights[0], 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(w.weights[1], 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(w.reset);

  const std::vector<ThetaEstimate> inverted{Theta(0.5, 2.0), Theta(1.0, 1.0)};
  const auto r = UpdateWeights(inverted);
  EXPECT_TRUE(r.reset);
  EXPECT_EQ(r.weights, (std::vector<double>{1.0, 1.0}));
}

TEST(UpdateWeights, AverageToOne) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ThetaEstimate> t;
    for (int v = 0; v < 3; ++v) t.push_back(Theta(u(rng), u(rng)));
    const auto w = UpdateWeights(t);
    if (w.reset) continue;
    EXPECT_NEAR((w.weights[0] + w.weights[1] + w.weights[2]) / 3.0, 1.0, 1e-12);
  }
}

TEST(Mvmc, PlantedTwoBlocksConverge) {
  const auto p = fixtures::PlantedMultiView(2, 10, 3, 0.9, 0.05, 4);
  const auto r = Mvmc(p.graphs, {}, 4);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 20);
  EXPECT_DOUBLE_EQ(stability::AdjustedRandIndex(r.labels, p.truth), 1.0);
  EXPECT_EQ(r.history.size(), static_cast<std::size_t>(r.iterations));
}

TEST(Mvmc, DeterministicGivenSeed) {
  const auto p = fixtures::PlantedMultiView(3, 8, 3, 0.6, 0.1, 9);
  const auto a = Mvmc(p.graphs, {}, 17);
  const auto b = Mvmc(p.graphs, {}, 17);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.gammas, b.gammas);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.modularity, b.modularity);
}

TEST(Mvmc, CompleteGraphIsOneCluster) {
  WeightedGraph g(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) g.AddEdge(i, j, 1.0);
  }
  const auto r = Mvmc(MultiViewGraphs({g}), {}, 0);
  EXPECT_EQ(NumClusters(r.labels), 1);
  EXPECT_TRUE(r.converged);
}

TEST(Mvmc, OscillationFallsBackToBestModularity) {
  const auto mv = TwoTriangles();
  // Alternates between a good and a poor clustering, so the resolution
  // estimate never settles.
  int calls = 0;
  Clusterer flip = [&](const MultiViewGraphs&, std::span<const double>, std::span<const double>,
                       std::uint64_t) {
    return (calls++ % 2 == 0) ? Labels{0, 0, 0, 1, 1, 1} : Labels{0, 0, 1, 1, 2, 2};
  };
  MvmcOptions opts;
  opts.max_iter = 6;
  const auto r = Mvmc(mv, opts, 0, flip);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 6);
  double best = -1e300;
  for (const auto& h : r.history) best = std::max(best, h.modularity);
  EXPECT_EQ(r.modularity, best);
  EXPECT_EQ(r.labels, (Labels{0, 0, 0, 1, 1, 1}));
  bool moved = false;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (std::abs(r.history[i].gammas[0] - r.history[i - 1].gammas[0]) > opts.tol) moved = true;
  }
  EXPECT_TRUE(moved);
}

TEST(Mvmc, EdgelessGraphsGiveSingletons) {
  const MultiViewGraphs mv({WeightedGraph(4), WeightedGraph(4)});
  const auto r = Mvmc(mv, {}, 0);
  EXPECT_EQ(r.labels, (Labels{0, 1, 2, 3}));
  EXPECT_TRUE(r.converged);
}
