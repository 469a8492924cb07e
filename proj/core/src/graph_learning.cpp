#include "mvmc/graph_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvmc::learn {

std::string_view MetricName(DistanceMetric metric) {
  return metric == DistanceMetric::kCosine ? "cosine" : "euclidean";
}

std::optional<DistanceMetric> ParseMetric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::kEuclidean;
  if (name == "cosine") return DistanceMetric::kCosine;
  return std::nullopt;
}

Eigen::MatrixXd PairwiseDistances(const Eigen::MatrixXd& rows, DistanceMetric metric) {
  const Eigen::Index n = rows.rows();
  if (n < 2) throw ContractError("need >= 2 groups");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (metric == DistanceMetric::kEuclidean) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        d(i, j) = d(j, i) = (rows.row(i) - rows.row(j)).norm();
      }
    }
    return d;
  }
  const Eigen::VectorXd norms = rows.rowwise().norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double dist = 1.0;
      if (norms(i) > 0.0 && norms(j) > 0.0) {
        const double cos = rows.row(i).dot(rows.row(j)) / (norms(i) * norms(j));
        dist = std::max(0.0, 1.0 - std::clamp(cos, -1.0, 1.0));
      }
      d(i, j) = d(j, i) = dist;
    }
  }
  return d;
}

Eigen::MatrixXd PairwiseDistances(const ingest::CountMatrix& rows, DistanceMetric metric) {
  return PairwiseDistances(Eigen::MatrixXd(rows.cast<double>()), metric);
}

int NeighborCount(int n) {
  if (n < 2) return 0;
  const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::min(k, n - 1);
}

std::vector<double> KDistanceCurve(const Eigen::MatrixXd& distances) {
  const auto n = static_cast<int>(distances.rows());
  const int k = NeighborCount(n);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n));
  std::vector<double> others;
  for (int i = 0; i < n; ++i) {
    others.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(distances(i, j));
    }
    std::nth_element(others.begin(), others.begin() + (k - 1), others.end());
    curve.push_back(others[static_cast<std::size_t>(k - 1)]);
  }
  std::sort(curve.begin(), curve.end());
  return curve;
}

std::size_t KneeIndex(const std::vector<double>& curve) {
  const std::size_t n = curve.size();
  if (n < 3) return 0;
  const double x0 = 1.0;
  const double y0 = curve.front();
  const double dx = static_cast<double>(n) - x0;
  const double dy = curve.back() - y0;
  const double chord = std::hypot(dx, dy);
  if (dy == 0.0) return 0;
  std::size_t best = 0;
  double best_dist = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1);
    const double dist = std::abs(dy * (x - x0) - dx * (curve[i] - y0)) / chord;
    if (dist > best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

double SelectRadius(const Eigen::MatrixXd& distances) {
  if (distances.rows() < 2) throw ContractError("need >= 2 groups");
  const auto curve = KDistanceCurve(distances);
  return curve[KneeIndex(curve)];
}

DistanceGraph BuildRbg(const Eigen::MatrixXd& distances, double radius) {
  if (!(radius >= 0.0)) throw ContractError("radius must be non-negative");
  DistanceGraph g;
  g.num_nodes = static_cast<int>(distances.rows());
  g.radius = radius;
  for (int i = 0; i < g.num_nodes; ++i) {
    for (int j = i + 1; j < g.num_nodes; ++j) {
      const double d = distances(i, j);
      if (d <= radius) g.edges.push_back({i, j, d, d == 0.0});
    }
  }
  return g;
}

SimilarityGraph ToSimilarity(const DistanceGraph& graph) {
  SimilarityGraph out;
  out.num_nodes = graph.num_nodes;
  out.radius = graph.radius;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& e : graph.edges) {
    if (e.duplicate) continue;
    sum += e.distance;
    ++count;
  }
  if (count > 0) {
    const double mean = sum / static_cast<double>(count);
    for (const auto& e : graph.edges) {
      if (!e.duplicate) sum_sq += (e.distance - mean) * (e.distance - mean);
    }
    out.sigma = std::sqrt(sum_sq / static_cast<double>(count));
  }

  out.edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    double w = 1.0;
    if (!e.duplicate) {
      w = out.sigma > 0.0
              ? std::exp(-(e.distance * e.distance) / (2.0 * out.sigma * out.sigma))
              : std::exp(-0.5);
    }
    // Very distant pairs can underflow; keep them strictly positive.
    w = std::max(w, std::numeric_limits<double>::min());
    out.edges.push_back({e.i, e.j, w});
  }
  return out;
}

SimilarityGraph LearnGraph(const ingest::CountMatrix& rows, DistanceMetric metric) {
  const Eigen::MatrixXd d = PairwiseDistances(rows, metric);
  return ToSimilarity(BuildRbg(d, SelectRadius(d)));
}

}  // namespace mvmc::learn
