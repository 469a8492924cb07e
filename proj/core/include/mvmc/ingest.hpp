#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mvmc/common.hpp"

namespace mvmc::ingest {

struct EventRecord {
  std::string event_id;
  int year = 0;
  std::string group;
  std::vector<std::string> tactics;  // 1..3
  std::vector<std::string> targets;  // 1..3
  std::vector<std::string> weapons;  // 1..4
  std::string region;
  bool doubt_flag = false;

  const std::vector<std::string>& categories(View view) const;
};

struct GroupMetadata {
  std::string group;
  std::string ideology;
  std::string most_common_region;
};

// Column names of the events CSV. Multi-valued fields are read from suffixed
// columns `{prefix}1..{prefix}{max}`; only the first suffix is required.
struct EventSchema {
  std::string event_id = "event_id";
  std::string year = "year";
  std::string group = "group";
  std::string tactic_prefix = "tactic";
  std::string target_prefix = "target";
  std::string weapon_prefix = "weapon";
  std::string region = "region";
  std::string doubt = "doubt";
  int max_tactics = 3;
  int max_targets = 3;
  int max_weapons = 4;
};

struct YearRange {
  int first = 0;
  int last = 0;

  bool Contains(int year) const { return year >= first && year <= last; }
  bool empty() const { return last < first; }
};

// Throws DataError naming the missing column or the offending line.
std::vector<EventRecord> ParseEvents(std::istream& in, const EventSchema& schema = {});
std::vector<EventRecord> ParseEvents(const std::filesystem::path& path,
                                     const EventSchema& schema = {});

std::vector<GroupMetadata> ParseMetadata(std::istream& in);
std::vector<GroupMetadata> ParseMetadata(const std::filesystem::path& path);

std::vector<EventRecord> RestrictToYears(std::span<const EventRecord> events, YearRange years);

// Perpetrator labels that do not denote a specific organization.
const std::set<std::string>& DefaultExcludedActors();

// Drops doubt-flagged events and excluded actors, then every group left with
// fewer than `min_attacks` events. Order of surviving events is preserved.
std::vector<EventRecord> FilterSample(std::span<const EventRecord> events, int min_attacks,
                                      const std::set<std::string>& excluded_actors =
                                          DefaultExcludedActors());

using CountMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Category universe for each view. Vocabularies are the sorted union of this
// universe and observed categories.
struct CategoryUniverse {
  std::array<std::vector<std::string>, kNumViews> categories;
};

// 9 tactics, 22 targets, 11 weapons.
const CategoryUniverse& DefaultUniverse();

// One year of data: rows are the groups active that year (sorted by name),
// columns follow the dataset vocabulary of each view.
struct YearSlice {
  int year = 0;
  std::vector<std::string> groups;
  std::array<CountMatrix, kNumViews> views;

  std::size_t num_groups() const { return groups.size(); }
  const CountMatrix& matrix(View view) const { return views[ViewIndex(view)]; }

  // Keeps only the given rows, in the given order.
  YearSlice Restrict(std::span<const std::size_t> rows) const;
};

class MultiViewDataset {
 public:
  MultiViewDataset() = default;
  MultiViewDataset(std::vector<YearSlice> slices,
                   std::array<std::vector<std::string>, kNumViews> vocabularies,
                   std::map<std::string, GroupMetadata> metadata);

  const std::vector<int>& years() const { return years_; }
  const YearSlice& slice(int year) const;
  bool has_year(int year) const;
  const std::vector<std::string>& vocabulary(View view) const {
    return vocabularies_[ViewIndex(view)];
  }
  // Groups without a metadata row get ideology/region "unknown".
  const GroupMetadata& metadata(const std::string& group) const;

  // Writes `{year}_{view}.csv` per slice into `dir`.
  void WriteDump(const std::filesystem::path& dir, std::string_view header_comment = {}) const;

 private:
  std::vector<int> years_;
  std::vector<YearSlice> slices_;
  std::array<std::vector<std::string>, kNumViews> vocabularies_;
  std::map<std::string, GroupMetadata> metadata_;
};

inline constexpr const char* kUnknownCategory = "unknown";

// Throws ConfigError on an empty year range. Only years with at least one
// event appear in the dataset.
MultiViewDataset BuildDataset(std::span<const EventRecord> events,
                              std::span<const GroupMetadata> metadata, YearRange years,
                              const CategoryUniverse& universe = DefaultUniverse());

}  // namespace mvmc::ingest
