#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvmc/ingest.hpp"
#include "mvmc/mvmc.hpp"
#include "mvmc/two_step.hpp"

namespace mvmc {

struct ClusterEnsemble {
  std::vector<Partition> runs;
  std::vector<std::uint64_t> seeds;
};

// Two-step clustering with seeds base_seed .. base_seed + runs - 1. Runs are
// spread over `jobs` threads; results are kept in seed order.
ClusterEnsemble RunEnsemble(const ingest::YearSlice& slice, const TwoStepOptions& options,
                            int runs, std::uint64_t base_seed, int jobs = 1);

// Same, running plain MVMC on already-built view graphs.
ClusterEnsemble RunEnsemble(const MultiViewGraphs& graphs, const MvmcOptions& options, int runs,
                            std::uint64_t base_seed, int jobs = 1);

// Bipartite consensus: items on one side, (run, cluster) label nodes on the
// other, a unit edge when the item holds that label. Louvain (gamma = w = 1)
// on that graph; each item's community is its consensus cluster. Runs are
// canonicalized and sorted first, so the result ignores run order and
// per-run relabelings.
Labels BgpaConsensus(std::span<const Labels> runs, std::uint64_t seed);
Labels BgpaConsensus(const ClusterEnsemble& ensemble, std::uint64_t seed);

// Mean adjusted Rand index over all run pairs; 1 for a single run.
double EnsembleAgreement(std::span<const Labels> runs);

}  // namespace mvmc
