#include "mvmc/weighted_graph.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace mvmc {

WeightedGraph::WeightedGraph(int num_nodes)
    : adjacency_(static_cast<std::size_t>(num_nodes)),
      loops_(static_cast<std::size_t>(num_nodes), 0.0),
      degrees_(static_cast<std::size_t>(num_nodes), 0.0) {}

WeightedGraph WeightedGraph::FromSimilarity(const learn::SimilarityGraph& graph) {
  WeightedGraph g(graph.num_nodes);
  for (const auto& e : graph.edges) g.AddEdge(e.i, e.j, e.weight);
  return g;
}

void WeightedGraph::AddEdge(int u, int v, double weight) {
  if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes()) {
    throw ContractError("edge endpoint out of range");
  }
  const auto su = static_cast<std::size_t>(u);
  const auto sv = static_cast<std::size_t>(v);
  if (u == v) {
    loops_[su] += weight;
    degrees_[su] += 2.0 * weight;
  } else {
    adjacency_[su].push_back({v, weight});
    adjacency_[sv].push_back({u, weight});
    degrees_[su] += weight;
    degrees_[sv] += weight;
  }
  total_weight_ += weight;
  ++num_edges_;
}

WeightedGraph WeightedGraph::Aggregate(std::span<const int> community, int num_communities) const {
  WeightedGraph out(num_communities);
  std::map<std::pair<int, int>, double> between;
  for (int u = 0; u < num_nodes(); ++u) {
    const int cu = community[static_cast<std::size_t>(u)];
    if (loops_[static_cast<std::size_t>(u)] != 0.0) {
      between[{cu, cu}] += loops_[static_cast<std::size_t>(u)];
    }
    for (const auto& nb : neighbors(u)) {
      if (nb.node < u) continue;  // each undirected edge once
      const int cv = community[static_cast<std::size_t>(nb.node)];
      between[{std::min(cu, cv), std::max(cu, cv)}] += nb.weight;
    }
  }
  for (const auto& [key, w] : between) out.AddEdge(key.first, key.second, w);
  return out;
}

MultiViewGraphs::MultiViewGraphs(std::vector<WeightedGraph> views) : views_(std::move(views)) {
  if (views_.empty()) throw ContractError("at least one view required");
  num_nodes_ = views_.front().num_nodes();
  for (const auto& g : views_) {
    if (g.num_nodes() != num_nodes_) throw ContractError("views disagree on node count");
  }
}

bool MultiViewGraphs::has_edges() const {
  return std::any_of(views_.begin(), views_.end(),
                     [](const WeightedGraph& g) { return g.total_weight() != 0.0; });
}

double ViewModularity(const WeightedGraph& graph, std::span<const int> labels, double gamma) {
  const int n = graph.num_nodes();
  if (static_cast<int>(labels.size()) != n) throw ContractError("labels must cover every node");
  const double two_m = 2.0 * graph.total_weight();
  if (two_m == 0.0) return 0.0;

  int max_label = -1;
  for (int c : labels) {
    if (c < 0) throw ContractError("unlabeled node");
    max_label = std::max(max_label, c);
  }
  std::vector<double> kappa(static_cast<std::size_t>(max_label + 1), 0.0);
  double intra = 0.0;
  for (int u = 0; u < n; ++u) {
    const int cu = labels[static_cast<std::size_t>(u)];
    kappa[static_cast<std::size_t>(cu)] += graph.degree(u);
    intra += 2.0 * graph.self_loop(u);
    for (const auto& nb : graph.neighbors(u)) {
      if (labels[static_cast<std::size_t>(nb.node)] == cu) intra += nb.weight;
    }
  }
  double null_term = 0.0;
  for (double k : kappa) null_term += k * k;
  return intra - gamma * null_term / two_m;
}

double MultiviewModularity(const MultiViewGraphs& graphs, std::span<const int> labels,
                           std::span<const double> gammas, std::span<const double> weights) {
  if (gammas.size() != graphs.num_views() || weights.size() != graphs.num_views()) {
    throw ContractError("need one gamma and one weight per view");
  }
  if (static_cast<int>(labels.size()) != graphs.num_nodes()) {
    throw ContractError("labels must cover every node");
  }
  for (int c : labels) {
    if (c < 0) throw ContractError("unlabeled node");
  }
  double q = 0.0;
  for (std::size_t v = 0; v < graphs.num_views(); ++v) {
    if (weights[v] == 0.0) continue;
    q += weights[v] * ViewModularity(graphs.view(v), labels, gammas[v]);
  }
  return q;
}

}  // namespace mvmc
