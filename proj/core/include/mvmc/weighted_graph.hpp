#pragma once

#include <span>
#include <vector>

#include "mvmc/common.hpp"
#include "mvmc/graph_learning.hpp"

namespace mvmc {

struct Neighbor {
  int node = 0;
  double weight = 0.0;
};

// Undirected weighted graph with optional self-loops. Adjacency follows the
// modularity convention A_ii = 2 * loop weight, so degree(i) = sum_j A_ij and
// the degrees sum to 2 * total_weight().
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int num_nodes);

  static WeightedGraph FromSimilarity(const learn::SimilarityGraph& graph);

  // u == v adds to the self-loop of u.
  void AddEdge(int u, int v, double weight);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  std::span<const Neighbor> neighbors(int u) const { return adjacency_[static_cast<std::size_t>(u)]; }
  double self_loop(int u) const { return loops_[static_cast<std::size_t>(u)]; }
  double degree(int u) const { return degrees_[static_cast<std::size_t>(u)]; }
  // |E|: each undirected edge and each loop counted once.
  double total_weight() const { return total_weight_; }
  std::size_t num_edges() const { return num_edges_; }

  // Collapses nodes by community (labels dense in [0, num_communities)).
  // Intra-community weight becomes self-loops.
  WeightedGraph Aggregate(std::span<const int> community, int num_communities) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> loops_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
  std::size_t num_edges_ = 0;
};

// One graph per view over a shared node set.
class MultiViewGraphs {
 public:
  MultiViewGraphs() = default;
  explicit MultiViewGraphs(std::vector<WeightedGraph> views);

  int num_nodes() const { return num_nodes_; }
  std::size_t num_views() const { return views_.size(); }
  const WeightedGraph& view(std::size_t v) const { return views_[v]; }
  const std::vector<WeightedGraph>& views() const { return views_; }
  bool has_edges() const;

 private:
  std::vector<WeightedGraph> views_;
  int num_nodes_ = 0;
};

// View-weighted, resolution-adjusted modularity summed over all ordered
// intra-cluster pairs (i = j included):
//   sum_v w_v * sum_{c_i = c_j} [A_ij - gamma_v k_i k_j / (2|E_v|)].
// Views without edges contribute 0. With one view and w = gamma = 1 this is
// 2|E| times Newman modularity.
double MultiviewModularity(const MultiViewGraphs& graphs, std::span<const int> labels,
                           std::span<const double> gammas, std::span<const double> weights);

// Single-view term of the above, unweighted.
double ViewModularity(const WeightedGraph& graph, std::span<const int> labels, double gamma);

}  // namespace mvmc
