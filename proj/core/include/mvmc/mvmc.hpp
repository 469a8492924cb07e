#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mvmc/louvain.hpp"
#include "mvmc/weighted_graph.hpp"

namespace mvmc {

inline constexpr double kThetaFloor = 1e-12;

// Edge propensities inside and between clusters relative to the
// configuration-model expectation, for one view.
struct ThetaEstimate {
  double theta_in = kThetaFloor;
  double theta_out = kThetaFloor;
  bool degenerate = false;  // expected intra weight >= total weight, or no edges
};

// Per view, with m = total weight, m_in = intra-cluster weight and
// E_in = sum_c kappa_c^2 / (4 m): theta_in = m_in / E_in and
// theta_out = (m - m_in) / (m - E_in), both floored at kThetaFloor.
std::vector<ThetaEstimate> EstimateThetas(const MultiViewGraphs& graphs,
                                          std::span<const int> labels);

// (theta_in - theta_out) / (ln theta_in - ln theta_out); theta_in in the limit.
double UpdateResolution(const ThetaEstimate& theta);

struct WeightUpdate {
  std::vector<double> weights;
  bool reset = false;  // mean log-ratio <= 0, all weights set to 1
};

// w_v = (ln theta_in - ln theta_out) / mean over views of the same.
WeightUpdate UpdateWeights(std::span<const ThetaEstimate> thetas);

struct MvmcOptions {
  int max_iter = 20;
  double tol = 0.01;
  double start_gamma = 1.0;
  double start_weight = 1.0;
};

struct MvmcIteration {
  std::vector<double> gammas;   // parameters the clustering was produced with
  std::vector<double> weights;
  double modularity = 0.0;
  int num_clusters = 0;
};

struct Partition {
  Labels labels;
  std::vector<double> gammas;
  std::vector<double> weights;
  double modularity = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<MvmcIteration> history;
};

// Clustering routine used inside MVMC. Defaults to multi-view Louvain.
using Clusterer = std::function<Labels(const MultiViewGraphs&, std::span<const double> gammas,
                                       std::span<const double> weights, std::uint64_t seed)>;

// Alternates clustering with resolution/weight updates. Returns the first
// clustering whose updated parameters move by less than `tol` (max-norm over
// views, for gammas and weights alike); otherwise the highest-modularity
// clustering seen, with converged = false.
Partition Mvmc(const MultiViewGraphs& graphs, const MvmcOptions& options, std::uint64_t seed,
               const Clusterer& clusterer = {});

}  // namespace mvmc
