#include "mvmc/mvmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvmc {

std::vector<ThetaEstimate> EstimateThetas(const MultiViewGraphs& graphs,
                                          std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != graphs.num_nodes()) {
    throw ContractError("labels must cover every node");
  }
  int max_label = -1;
  for (int c : labels) {
    if (c < 0) throw ContractError("unlabeled node");
    max_label = std::max(max_label, c);
  }

  std::vector<ThetaEstimate> out;
  out.reserve(graphs.num_views());
  std::vector<double> kappa(static_cast<std::size_t>(max_label + 1));
  for (const auto& g : graphs.views()) {
    ThetaEstimate t;
    const double m = g.total_weight();
    if (m <= 0.0) {
      t.degenerate = true;
      out.push_back(t);
      continue;
    }
    std::fill(kappa.begin(), kappa.end(), 0.0);
    double m_in = 0.0;
    for (int u = 0; u < g.num_nodes(); ++u) {
      const int cu = labels[static_cast<std::size_t>(u)];
      kappa[static_cast<std::size_t>(cu)] += g.degree(u);
      m_in += g.self_loop(u);
      for (const auto& nb : g.neighbors(u)) {
        if (nb.node > u && labels[static_cast<std::size_t>(nb.node)] == cu) m_in += nb.weight;
      }
    }
    double e_in = 0.0;
    for (double k : kappa) e_in += k * k;
    e_in /= 4.0 * m;

    t.theta_in = std::max(m_in / e_in, kThetaFloor);
    if (e_in >= m) {
      t.degenerate = true;
      t.theta_out = kThetaFloor;
    } else {
      t.theta_out = std::max((m - m_in) / (m - e_in), kThetaFloor);
    }
    out.push_back(t);
  }
  return out;
}

double UpdateResolution(const ThetaEstimate& theta) {
  const double diff = theta.theta_in - theta.theta_out;
  if (std::abs(diff) < 1e-9) return theta.theta_in;
  return diff / (std::log(theta.theta_in) - std::log(theta.theta_out));
}

WeightUpdate UpdateWeights(std::span<const ThetaEstimate> thetas) {
  WeightUpdate out;
  if (thetas.empty()) return out;
  std::vector<double> ratios;
  ratios.reserve(thetas.size());
  for (const auto& t : thetas) ratios.push_back(std::log(t.theta_in) - std::log(t.theta_out));
  const double mean =
      std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  if (!(mean > 0.0)) {
    out.weights.assign(thetas.size(), 1.0);
    out.reset = true;
    return out;
  }
  for (double r : ratios) out.weights.push_back(r / mean);
  return out;
}

namespace {

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

Partition Mvmc(const MultiViewGraphs& graphs, const MvmcOptions& options, std::uint64_t seed,
               const Clusterer& clusterer) {
  if (options.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(options.tol > 0.0)) throw ConfigError("tol must be > 0");

  const std::size_t m = graphs.num_views();
  std::vector<double> gammas(m, options.start_gamma);
  std::vector<double> weights(m, options.start_weight);

  Partition result;
  if (!graphs.has_edges()) {
    // Nothing to optimize: every node is its own cluster.
    result.labels.resize(static_cast<std::size_t>(graphs.num_nodes()));
    std::iota(result.labels.begin(), result.labels.end(), 0);
    result.gammas = gammas;
    result.weights = weights;
    result.converged = true;
    result.iterations = 0;
    return result;
  }

  auto cluster = [&](std::uint64_t s) -> Labels {
    if (clusterer) return Canonicalize(clusterer(graphs, gammas, weights, s));
    return Louvain(graphs, gammas, weights, s).labels;
  };

  std::vector<Labels> clusterings;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    Labels labels = cluster(DeriveSeed(seed, static_cast<std::uint64_t>(iter)));
    const double q = MultiviewModularity(graphs, labels, gammas, weights);
    result.history.push_back({gammas, weights, q, NumClusters(labels)});

    const auto thetas = EstimateThetas(graphs, labels);
    std::vector<double> next_gammas;
    next_gammas.reserve(m);
    for (const auto& t : thetas) next_gammas.push_back(UpdateResolution(t));
    std::vector<double> next_weights = UpdateWeights(thetas).weights;

    const bool stable = MaxAbsDiff(next_gammas, gammas) < options.tol &&
                        MaxAbsDiff(next_weights, weights) < options.tol;
    if (stable) {
      result.labels = std::move(labels);
      result.gammas = gammas;
      result.weights = weights;
      result.modularity = q;
      result.converged = true;
      result.iterations = iter + 1;
      return result;
    }
    clusterings.push_back(std::move(labels));
    gammas = std::move(next_gammas);
    weights = std::move(next_weights);
  }

  // No convergence: best recorded modularity, earliest on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.history.size(); ++i) {
    if (result.history[i].modularity > result.history[best].modularity) best = i;
  }
  result.labels = std::move(clusterings[best]);
  result.gammas = result.history[best].gammas;
  result.weights = result.history[best].weights;
  result.modularity = result.history[best].modularity;
  result.converged = false;
  result.iterations = options.max_iter;
  return result;
}

}  // namespace mvmc
