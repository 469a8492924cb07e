#include "mvmc/ensemble.hpp"

#include <algorithm>

#include "mvmc/louvain.hpp"
#include "mvmc/stability.hpp"

namespace mvmc {

ClusterEnsemble RunEnsemble(const ingest::YearSlice& slice, const TwoStepOptions& options,
                            int runs, std::uint64_t base_seed, int jobs) {
  if (runs < 1) throw ConfigError("ensemble runs must be >= 1");
  ClusterEnsemble ensemble;
  ensemble.runs.resize(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) ensemble.seeds.push_back(base_seed + static_cast<std::uint64_t>(r));
  ParallelFor(static_cast<std::size_t>(runs), jobs, [&](std::size_t r) {
    ensemble.runs[r] = TwoStepCluster(slice, options, ensemble.seeds[r]).final_partition;
  });
  return ensemble;
}

ClusterEnsemble RunEnsemble(const MultiViewGraphs& graphs, const MvmcOptions& options, int runs,
                            std::uint64_t base_seed, int jobs) {
  if (runs < 1) throw ConfigError("ensemble runs must be >= 1");
  ClusterEnsemble ensemble;
  ensemble.runs.resize(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) ensemble.seeds.push_back(base_seed + static_cast<std::uint64_t>(r));
  ParallelFor(static_cast<std::size_t>(runs), jobs, [&](std::size_t r) {
    ensemble.runs[r] = Mvmc(graphs, options, ensemble.seeds[r]);
  });
  return ensemble;
}

Labels BgpaConsensus(std::span<const Labels> runs, std::uint64_t seed) {
  if (runs.empty()) throw ContractError("ensemble must not be empty");
  const std::size_t n = runs.front().size();
  std::vector<Labels> canonical;
  canonical.reserve(runs.size());
  for (const auto& r : runs) {
    if (r.size() != n) throw ContractError("ensemble runs disagree on node count");
    canonical.push_back(Canonicalize(r));
  }
  std::sort(canonical.begin(), canonical.end());

  int num_label_nodes = 0;
  std::vector<int> offset;
  for (const auto& r : canonical) {
    offset.push_back(num_label_nodes);
    num_label_nodes += NumClusters(r);
  }
  WeightedGraph bipartite(static_cast<int>(n) + num_label_nodes);
  for (std::size_t r = 0; r < canonical.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      bipartite.AddEdge(static_cast<int>(i), static_cast<int>(n) + offset[r] + canonical[r][i], 1.0);
    }
  }
  const Labels all = Louvain(bipartite, seed).labels;
  return Canonicalize(std::span<const int>(all.data(), n));
}

Labels BgpaConsensus(const ClusterEnsemble& ensemble, std::uint64_t seed) {
  std::vector<Labels> runs;
  runs.reserve(ensemble.runs.size());
  for (const auto& p : ensemble.runs) runs.push_back(p.labels);
  return BgpaConsensus(runs, seed);
}

double EnsembleAgreement(std::span<const Labels> runs) {
  if (runs.size() < 2) return 1.0;
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      sum += stability::AdjustedRandIndex(runs[a], runs[b]);
      ++pairs;
    }
  }
  return sum / pairs;
}

}  // namespace mvmc
