#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mvmc/common.hpp"
#include "mvmc/graph_learning.hpp"

namespace mvmc::netstats {

// Unweighted descriptive statistics of a graph's topology.
struct GraphStats {
  double density = 0.0;
  double clustering_coefficient = 0.0;  // mean local clustering, degree < 2 counts as 0
  int n_components = 0;
  std::optional<double> degree_assortativity;  // empty when all degrees are equal
  int n_isolates = 0;
};

GraphStats ComputeGraphStats(int num_nodes, std::span<const std::pair<int, int>> edges);
GraphStats ComputeGraphStats(const learn::SimilarityGraph& graph);

struct TrendRow {
  int year = 0;
  int n_clusters = 0;
  int n_groups = 0;
  double ratio = 0.0;
  int n_isolates = 0;  // singleton clusters
};

struct YearPartition {
  int year = 0;
  Labels labels;
};

// Clusters-to-groups ratio per year. Years must be sorted ascending.
std::vector<TrendRow> ClusterTrend(std::span<const YearPartition> years);

}  // namespace mvmc::netstats
