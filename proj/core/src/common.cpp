#include "mvmc/common.hpp"

#include <algorithm>
#include <unordered_map>

namespace mvmc {

std::string_view ViewName(View view) {
  switch (view) {
    case View::kTactic:
      return "tactic";
    case View::kTarget:
      return "target";
    case View::kWeapon:
      return "weapon";
  }
  return "unknown";
}

std::optional<View> ParseView(std::string_view name) {
  for (View v : kAllViews) {
    if (ViewName(v) == name) return v;
  }
  return std::nullopt;
}

Labels Canonicalize(std::span<const int> labels) {
  std::unordered_map<int, int> remap;
  Labels out;
  out.reserve(labels.size());
  for (int label : labels) {
    auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

int NumClusters(std::span<const int> labels) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mvmc
