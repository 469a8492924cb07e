#include "mvmc/network_stats.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace mvmc::netstats {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

GraphStats ComputeGraphStats(int num_nodes, std::span<const std::pair<int, int>> edges) {
  if (num_nodes < 2) throw ContractError("graph statistics need >= 2 nodes");

  std::vector<std::set<int>> adj(static_cast<std::size_t>(num_nodes));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
      throw ContractError("edge endpoint out of range");
    }
    if (u == v) continue;
    adj[static_cast<std::size_t>(u)].insert(v);
    adj[static_cast<std::size_t>(v)].insert(u);
  }

  GraphStats s;
  std::size_t m = 0;
  for (const auto& nb : adj) m += nb.size();
  m /= 2;
  const double n = num_nodes;
  s.density = 2.0 * static_cast<double>(m) / (n * (n - 1.0));

  double clustering_sum = 0.0;
  for (int u = 0; u < num_nodes; ++u) {
    const auto& nb = adj[static_cast<std::size_t>(u)];
    const auto k = nb.size();
    if (k == 0) ++s.n_isolates;
    if (k < 2) continue;
    std::size_t links = 0;
    for (auto a = nb.begin(); a != nb.end(); ++a) {
      for (auto b = std::next(a); b != nb.end(); ++b) {
        if (adj[static_cast<std::size_t>(*a)].contains(*b)) ++links;
      }
    }
    clustering_sum += 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  s.clustering_coefficient = clustering_sum / n;

  DisjointSets sets(num_nodes);
  for (int u = 0; u < num_nodes; ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) sets.Union(u, v);
  }
  for (int u = 0; u < num_nodes; ++u) {
    if (sets.Find(u) == u) ++s.n_components;
  }

  // Pearson correlation of endpoint degrees over both orientations of every edge.
  double sum_x = 0.0;
  double sum_xx = 0.0;
  double sum_xy = 0.0;
  double count = 0.0;
  for (int u = 0; u < num_nodes; ++u) {
    const double du = static_cast<double>(adj[static_cast<std::size_t>(u)].size());
    for (int v : adj[static_cast<std::size_t>(u)]) {
      const double dv = static_cast<double>(adj[static_cast<std::size_t>(v)].size());
      sum_x += du;
      sum_xx += du * du;
      sum_xy += du * dv;
      count += 1.0;
    }
  }
  if (count > 0.0) {
    const double mean = sum_x / count;
    const double var = sum_xx / count - mean * mean;
    const double cov = sum_xy / count - mean * mean;
    if (var > 1e-12 * std::max(1.0, mean * mean)) s.degree_assortativity = cov / var;
  }
  return s;
}

GraphStats ComputeGraphStats(const learn::SimilarityGraph& graph) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) edges.emplace_back(e.i, e.j);
  return ComputeGraphStats(graph.num_nodes, edges);
}

std::vector<TrendRow> ClusterTrend(std::span<const YearPartition> years) {
  std::vector<TrendRow> out;
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (i > 0 && years[i].year <= years[i - 1].year) {
      throw ContractError("years must be sorted ascending");
    }
    const auto& labels = years[i].labels;
    std::map<int, int> sizes;
    for (int c : labels) ++sizes[c];
    TrendRow row;
    row.year = years[i].year;
    row.n_groups = static_cast<int>(labels.size());
    row.n_clusters = static_cast<int>(sizes.size());
    row.ratio = row.n_groups > 0 ? static_cast<double>(row.n_clusters) / row.n_groups : 0.0;
    for (const auto& [_, size] : sizes) {
      if (size == 1) ++row.n_isolates;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace mvmc::netstats
