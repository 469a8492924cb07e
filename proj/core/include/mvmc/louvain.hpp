#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvmc/weighted_graph.hpp"

namespace mvmc {

struct LouvainResult {
  Labels labels;                // dense, first-appearance order
  std::vector<double> q_trace;  // initial singleton Q, then Q after every sweep
  int levels = 0;               // aggregation levels that made at least one move
};

// Greedy multi-view Louvain on the objective of MultiviewModularity.
// Nodes are visited in a seed-shuffled order each sweep; a node moves to the
// neighbouring (or an empty) community with the largest gain, ties to the
// lowest community id, and only when that beats staying put. Sweeps repeat
// until one makes no move; the graph is then aggregated and the process
// restarts, until a level makes no move at all. The whole pass is repeated
// from several seeds derived from `seed` and the highest objective wins
// (earliest pass on ties), so results stay deterministic per seed.
LouvainResult Louvain(const MultiViewGraphs& graphs, std::span<const double> gammas,
                      std::span<const double> weights, std::uint64_t seed);

// Single-view convenience with gamma = w = 1.
LouvainResult Louvain(const WeightedGraph& graph, std::uint64_t seed);

}  // namespace mvmc
