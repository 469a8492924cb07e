#include "mvmc/two_step.hpp"

#include <algorithm>
#include <map>

namespace mvmc {

ViewGraphs LearnSliceGraphs(const ingest::YearSlice& slice, learn::DistanceMetric metric) {
  ViewGraphs out;
  for (View view : kAllViews) {
    out[ViewIndex(view)] = learn::LearnGraph(slice.matrix(view), metric);
  }
  return out;
}

MultiViewGraphs ToMultiView(const ViewGraphs& graphs) {
  std::vector<WeightedGraph> views;
  views.reserve(graphs.size());
  for (const auto& g : graphs) views.push_back(WeightedGraph::FromSimilarity(g));
  return MultiViewGraphs(std::move(views));
}

int LargestCluster(std::span<const int> labels) {
  std::map<int, int> sizes;
  for (int c : labels) ++sizes[c];
  int best = -1;
  int best_size = 0;
  for (const auto& [c, size] : sizes) {
    if (size > best_size) {
      best = c;
      best_size = size;
    }
  }
  return best;
}

Labels CombineTwoStep(std::span<const int> rough, std::span<const std::size_t> bulk_rows,
                      std::span<const int> refined) {
  if (bulk_rows.size() != refined.size()) throw ContractError("refined labels must match bulk rows");
  int refined_max = -1;
  for (int c : refined) refined_max = std::max(refined_max, c);
  Labels combined(rough.size());
  std::vector<bool> in_bulk(rough.size(), false);
  for (std::size_t k = 0; k < bulk_rows.size(); ++k) {
    combined[bulk_rows[k]] = refined[k];
    in_bulk[bulk_rows[k]] = true;
  }
  for (std::size_t i = 0; i < rough.size(); ++i) {
    if (!in_bulk[i]) combined[i] = refined_max + 1 + rough[i];
  }
  return Canonicalize(combined);
}

TwoStepResult TwoStepCluster(const ingest::YearSlice& slice, const TwoStepOptions& options,
                             std::uint64_t seed) {
  if (slice.num_groups() < 2) throw ContractError("two-step clustering needs >= 2 groups");
  if (options.refine_min < 2) throw ConfigError("refine_min must be >= 2");

  TwoStepResult result;
  const MultiViewGraphs graphs = ToMultiView(LearnSliceGraphs(slice, options.metric));
  result.rough = Mvmc(graphs, options.mvmc, DeriveSeed(seed, 0));
  result.final_partition = result.rough;

  const int bulk = LargestCluster(result.rough.labels);
  for (std::size_t i = 0; i < result.rough.labels.size(); ++i) {
    if (result.rough.labels[i] == bulk) result.bulk_rows.push_back(i);
  }
  if (static_cast<int>(result.bulk_rows.size()) < options.refine_min) {
    result.bulk_rows.clear();
    result.final_partition.history.clear();
    return result;
  }

  const ingest::YearSlice bulk_slice = slice.Restrict(result.bulk_rows);
  const MultiViewGraphs bulk_graphs = ToMultiView(LearnSliceGraphs(bulk_slice, options.metric));
  result.refined = Mvmc(bulk_graphs, options.mvmc, DeriveSeed(seed, 1));

  Partition& final_partition = result.final_partition;
  final_partition.labels =
      CombineTwoStep(result.rough.labels, result.bulk_rows, result.refined->labels);
  final_partition.modularity = MultiviewModularity(graphs, final_partition.labels,
                                                   result.rough.gammas, result.rough.weights);
  final_partition.converged = result.rough.converged && result.refined->converged;
  final_partition.iterations = result.rough.iterations + result.refined->iterations;
  final_partition.history.clear();
  return result;
}

}  // namespace mvmc
