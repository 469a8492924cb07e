#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvmc/graph_learning.hpp"
#include "mvmc/ingest.hpp"
#include "mvmc/mvmc.hpp"

namespace mvmc {

using ViewGraphs = std::array<learn::SimilarityGraph, kNumViews>;

// Learns one similarity graph per view of a year slice.
ViewGraphs LearnSliceGraphs(const ingest::YearSlice& slice, learn::DistanceMetric metric);
MultiViewGraphs ToMultiView(const ViewGraphs& graphs);

struct TwoStepOptions {
  learn::DistanceMetric metric = learn::DistanceMetric::kEuclidean;
  MvmcOptions mvmc;
  int refine_min = 4;  // smallest bulk cluster worth re-clustering
};

struct TwoStepResult {
  Partition final_partition;
  Partition rough;
  std::optional<Partition> refined;
  std::vector<std::size_t> bulk_rows;  // rows re-clustered in the refined pass
};

// Index of the largest cluster, lowest label on ties.
int LargestCluster(std::span<const int> labels);

// Bulk rows take their refined labels; every other row keeps its rough label,
// shifted past the refined ids. Result is canonicalized.
Labels CombineTwoStep(std::span<const int> rough, std::span<const std::size_t> bulk_rows,
                      std::span<const int> refined);

// Rough MVMC over all groups, then a refined MVMC over the largest rough
// cluster when it has at least refine_min members.
TwoStepResult TwoStepCluster(const ingest::YearSlice& slice, const TwoStepOptions& options,
                             std::uint64_t seed);

}  // namespace mvmc
