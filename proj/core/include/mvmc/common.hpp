#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvmc {

// The three attack dimensions. Each yields its own group x category matrix.
enum class View : std::uint8_t { kTactic = 0, kTarget = 1, kWeapon = 2 };

inline constexpr std::size_t kNumViews = 3;
inline constexpr std::array<View, kNumViews> kAllViews{View::kTactic, View::kTarget,
                                                       View::kWeapon};

std::string_view ViewName(View view);
std::optional<View> ParseView(std::string_view name);

inline constexpr std::size_t ViewIndex(View view) { return static_cast<std::size_t>(view); }

// Node index -> cluster id.
using Labels = std::vector<int>;

// Relabels clusters densely from 0 in order of first appearance.
Labels Canonicalize(std::span<const int> labels);

int NumClusters(std::span<const int> labels);

// Exit-code carrying errors. The CLI maps each category to its exit status.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken caller contract: unlabeled node, mismatched node sets, bad index.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Deterministic seed derivation (splitmix64 finalizer over seed and stream).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Runs body(i) for i in [0, count) on at most `jobs` threads. Results must be
// written to per-index slots; the first exception thrown is rethrown.
template <typename Body>
void ParallelFor(std::size_t count, int jobs, Body&& body);

}  // namespace mvmc

#include "mvmc/detail/parallel.hpp"
