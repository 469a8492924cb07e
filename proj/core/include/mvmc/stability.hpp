#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvmc/common.hpp"

namespace mvmc::stability {

// Pair counts of two labelings over the same items.
struct PairCounts {
  double both = 0.0;     // sum_ij C(n_ij, 2)
  double in_a = 0.0;     // sum_i C(a_i, 2)
  double in_b = 0.0;     // sum_j C(b_j, 2)
  double total = 0.0;    // C(n, 2)
};

PairCounts CountPairs(std::span<const int> a, std::span<const int> b);

// Chance-adjusted Rand index from the contingency table. When the expected
// and maximum index coincide it returns 1 if the co-clustered pair sets are
// identical and 0 otherwise. Requires equal sizes and n >= 2.
double AdjustedRandIndex(std::span<const int> a, std::span<const int> b);

// TP / sqrt((TP + FP)(TP + FN)). 1 when both labelings are all singletons; 0
// when only one of them has no co-clustered pair.
double FowlkesMallows(std::span<const int> a, std::span<const int> b);

enum class Metric { kAri, kFms };

std::optional<Metric> ParseMetric(std::string_view name);
std::string_view MetricName(Metric metric);

// Group name -> cluster label.
using NamedLabels = std::map<std::string, int>;

double Compare(const NamedLabels& a, const NamedLabels& b, Metric metric);

struct YearClustering {
  int year = 0;
  NamedLabels labels;  // keys are the year's active groups
};

// Metric over the groups active in both years, labels kept as-is. Entries with
// fewer than two shared groups are empty. Diagonal is 1.
using StabilityMatrix = std::vector<std::vector<std::optional<double>>>;

StabilityMatrix ComputeStabilityMatrix(std::span<const YearClustering> years, Metric metric);

}  // namespace mvmc::stability
