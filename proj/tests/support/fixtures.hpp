#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mvmc/common.hpp"
#include "mvmc/ingest.hpp"
#include "mvmc/weighted_graph.hpp"
#include "oracles.hpp"

namespace fixtures {

struct Planted {
  mvmc::MultiViewGraphs graphs;
  mvmc::Labels truth;
};

// Blocks of `block_size` nodes. Within a block each pair is linked with
// probability p_in and weight in [0.8, 1]; across blocks with probability
// p_out and weight in [0.05, 0.15]. Every view is drawn independently.
Planted PlantedMultiView(int blocks, int block_size, int views, double p_in, double p_out,
                         std::uint64_t seed);

// G(n, p) with unit weights.
std::vector<oracle::Edge> RandomGraph(int n, double p, std::mt19937_64& rng);

mvmc::WeightedGraph ToGraph(int n, const std::vector<oracle::Edge>& edges);

// Event with one category per view.
mvmc::ingest::EventRecord Event(std::string id, int year, std::string group, std::string tactic,
                                std::string target, std::string weapon,
                                std::string region = "South Asia", bool doubt = false);

}  // namespace fixtures
