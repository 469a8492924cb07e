#include "mvmc/stability.hpp"

#include <cmath>
#include <map>

namespace mvmc::stability {
namespace {

double Choose2(double k) { return k * (k - 1.0) / 2.0; }

void CheckSizes(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ContractError("labelings cover different node sets");
  if (a.size() < 2) throw ContractError("need at least two nodes");
}

}  // namespace

PairCounts CountPairs(std::span<const int> a, std::span<const int> b) {
  CheckSizes(a, b);
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> rows;
  std::map<int, long long> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  PairCounts pc;
  for (const auto& [_, k] : joint) pc.both += Choose2(static_cast<double>(k));
  for (const auto& [_, k] : rows) pc.in_a += Choose2(static_cast<double>(k));
  for (const auto& [_, k] : cols) pc.in_b += Choose2(static_cast<double>(k));
  pc.total = Choose2(static_cast<double>(a.size()));
  return pc;
}

double AdjustedRandIndex(std::span<const int> a, std::span<const int> b) {
  const PairCounts pc = CountPairs(a, b);
  const double expected = pc.in_a * pc.in_b / pc.total;
  const double max_index = 0.5 * (pc.in_a + pc.in_b);
  const double denom = max_index - expected;
  if (denom == 0.0) {
    const bool same_pairs = pc.both == pc.in_a && pc.both == pc.in_b;
    return same_pairs ? 1.0 : 0.0;
  }
  return (pc.both - expected) / denom;
}

double FowlkesMallows(std::span<const int> a, std::span<const int> b) {
  const PairCounts pc = CountPairs(a, b);
  if (pc.in_a == 0.0 || pc.in_b == 0.0) {
    return (pc.in_a == 0.0 && pc.in_b == 0.0) ? 1.0 : 0.0;
  }
  return pc.both / std::sqrt(pc.in_a * pc.in_b);
}

std::optional<Metric> ParseMetric(std::string_view name) {
  if (name == "ari") return Metric::kAri;
  if (name == "fms") return Metric::kFms;
  return std::nullopt;
}

std::string_view MetricName(Metric metric) { return metric == Metric::kAri ? "ari" : "fms"; }

double Compare(const NamedLabels& a, const NamedLabels& b, Metric metric) {
  if (a.size() != b.size()) throw ContractError("labelings cover different node sets");
  std::vector<int> la;
  std::vector<int> lb;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) throw ContractError("labelings cover different node sets");
    la.push_back(ia->second);
    lb.push_back(ib->second);
  }
  return metric == Metric::kAri ? AdjustedRandIndex(la, lb) : FowlkesMallows(la, lb);
}

StabilityMatrix ComputeStabilityMatrix(std::span<const YearClustering> years, Metric metric) {
  const std::size_t t = years.size();
  StabilityMatrix out(t, std::vector<std::optional<double>>(t));
  for (std::size_t i = 0; i < t; ++i) {
    out[i][i] = 1.0;
    for (std::size_t j = i + 1; j < t; ++j) {
      NamedLabels sa;
      NamedLabels sb;
      for (const auto& [group, label] : years[i].labels) {
        auto it = years[j].labels.find(group);
        if (it == years[j].labels.end()) continue;
        sa.emplace(group, label);
        sb.emplace(group, it->second);
      }
      if (sa.size() < 2) continue;
      out[i][j] = out[j][i] = Compare(sa, sb, metric);
    }
  }
  return out;
}

}  // namespace mvmc::stability
