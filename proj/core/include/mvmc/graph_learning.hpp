#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

#include "mvmc/ingest.hpp"

namespace mvmc::learn {

enum class DistanceMetric { kEuclidean, kCosine };

std::string_view MetricName(DistanceMetric metric);
std::optional<DistanceMetric> ParseMetric(std::string_view name);

// Dense symmetric distance matrix between rows. Under cosine, an all-zero row
// is at distance 1 from every other row. Requires at least two rows.
Eigen::MatrixXd PairwiseDistances(const Eigen::MatrixXd& rows, DistanceMetric metric);
Eigen::MatrixXd PairwiseDistances(const ingest::CountMatrix& rows, DistanceMetric metric);

// ceil(sqrt(n)), capped at n - 1.
int NeighborCount(int n);

// Each node's distance to its k-th nearest neighbour (self excluded), sorted
// ascending.
std::vector<double> KDistanceCurve(const Eigen::MatrixXd& distances);

// Index of the point farthest from the chord joining the first and last
// points of `curve`; 0 for a flat curve. Ties resolve to the lowest index.
std::size_t KneeIndex(const std::vector<double>& curve);

// Radius at the knee of the sorted k-distance curve.
double SelectRadius(const Eigen::MatrixXd& distances);

struct DistanceEdge {
  int i = 0;  // i < j
  int j = 0;
  double distance = 0.0;
  bool duplicate = false;  // distance exactly 0
};

// Radius-ball graph: an edge for every pair with distance <= radius. Edges are
// stored once with i < j; the graph is implicitly symmetric.
struct DistanceGraph {
  int num_nodes = 0;
  double radius = 0.0;
  std::vector<DistanceEdge> edges;
};

DistanceGraph BuildRbg(const Eigen::MatrixXd& distances, double radius);

struct SimilarityEdge {
  int i = 0;
  int j = 0;
  double weight = 0.0;  // in (0, 1]
};

struct SimilarityGraph {
  int num_nodes = 0;
  double radius = 0.0;
  double sigma = 0.0;
  std::vector<SimilarityEdge> edges;
};

// Gaussian kernel with sigma = population std of the positive edge distances.
// Duplicate (zero-distance) edges map to 1.
SimilarityGraph ToSimilarity(const DistanceGraph& graph);

// distances -> radius -> RBG -> kernel, for one view matrix.
SimilarityGraph LearnGraph(const ingest::CountMatrix& rows, DistanceMetric metric);

}  // namespace mvmc::learn
