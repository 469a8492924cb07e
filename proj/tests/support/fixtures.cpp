#include "fixtures.hpp"

namespace fixtures {

Planted PlantedMultiView(int blocks, int block_size, int views, double p_in, double p_out,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = blocks * block_size;
  Planted out;
  for (int i = 0; i < n; ++i) out.truth.push_back(i / block_size);
  std::vector<mvmc::WeightedGraph> graphs;
  for (int v = 0; v < views; ++v) {
    mvmc::WeightedGraph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = out.truth[i] == out.truth[j];
        if (unit(rng) < (same ? p_in : p_out)) {
          g.AddEdge(i, j, same ? 0.8 + 0.2 * unit(rng) : 0.05 + 0.1 * unit(rng));
        }
      }
    }
    graphs.push_back(std::move(g));
  }
  out.graphs = mvmc::MultiViewGraphs(std::move(graphs));
  return out;
}

std::vector<oracle::Edge> RandomGraph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<oracle::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unit(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

mvmc::WeightedGraph ToGraph(int n, const std::vector<oracle::Edge>& edges) {
  mvmc::WeightedGraph g(n);
  for (const auto& e : edges) g.AddEdge(e.u, e.v, e.w);
  return g;
}

mvmc::ingest::EventRecord Event(std::string id, int year, std::string group, std::string tactic,
                                std::string target, std::string weapon, std::string region,
                                bool doubt) {
  mvmc::ingest::EventRecord e;
  e.event_id = std::move(id);
  e.year = year;
  e.group = std::move(group);
  e.tactics = {std::move(tactic)};
  e.targets = {std::move(target)};
  e.weapons = {std::move(weapon)};
  e.region = std::move(region);
  e.doubt_flag = doubt;
  return e;
}

}  // namespace fixtures
