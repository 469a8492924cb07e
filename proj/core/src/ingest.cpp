#include "mvmc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mvmc/csv.hpp"

namespace mvmc::ingest {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t Require(const csv::Header& header, const std::string& name) {
  auto index = header.Find(name);
  if (!index) throw DataError("missing required column: " + name);
  return *index;
}

std::vector<std::size_t> SuffixedColumns(const csv::Header& header, const std::string& prefix,
                                         int max_count) {
  std::vector<std::size_t> columns{Require(header, prefix + "1")};
  for (int k = 2; k <= max_count; ++k) {
    if (auto index = header.Find(prefix + std::to_string(k))) columns.push_back(*index);
  }
  return columns;
}

std::vector<std::string> CollectNonBlank(const std::vector<std::string>& row,
                                         const std::vector<std::size_t>& columns) {
  std::vector<std::string> out;
  for (std::size_t c : columns) {
    if (c >= row.size()) continue;
    std::string value = Trim(row[c]);
    if (!value.empty()) out.push_back(std::move(value));
  }
  return out;
}

std::string LineError(std::size_t line, std::string_view what) {
  std::ostringstream msg;
  msg << "line " << line << ": " << what;
  return msg.str();
}

bool ParseDoubt(const std::string& raw, std::size_t line) {
  const std::string v = Trim(raw);
  if (v.empty() || v == "0" || v == "false" || v == "FALSE" || v == "False") return false;
  if (v == "1" || v == "true" || v == "TRUE" || v == "True") return true;
  throw DataError(LineError(line, "unparseable doubt flag '" + v + "'"));
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

const std::vector<std::string>& EventRecord::categories(View view) const {
  switch (view) {
    case View::kTactic:
      return tactics;
    case View::kTarget:
      return targets;
    case View::kWeapon:
      return weapons;
  }
  return tactics;
}

std::vector<EventRecord> ParseEvents(std::istream& in, const EventSchema& schema) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.Next(row)) throw DataError("events file is empty");
  const csv::Header header(row);

  const std::size_t id_col = Require(header, schema.event_id);
  const std::size_t year_col = Require(header, schema.year);
  const std::size_t group_col = Require(header, schema.group);
  const auto tactic_cols = SuffixedColumns(header, schema.tactic_prefix, schema.max_tactics);
  const auto target_cols = SuffixedColumns(header, schema.target_prefix, schema.max_targets);
  const auto weapon_cols = SuffixedColumns(header, schema.weapon_prefix, schema.max_weapons);
  const std::size_t region_col = Require(header, schema.region);
  const std::size_t doubt_col = Require(header, schema.doubt);
  const std::size_t width = header.names().size();

  std::vector<EventRecord> events;
  while (reader.Next(row)) {
    const std::size_t line = reader.line();
    if (row.size() == 1 && Trim(row[0]).empty()) continue;  // blank line
    if (row.size() < width) row.resize(width);

    EventRecord e;
    e.event_id = Trim(row[id_col]);
    const std::string year_text = Trim(row[year_col]);
    const char* begin = year_text.data();
    const char* end = begin + year_text.size();
    auto [ptr, ec] = std::from_chars(begin, end, e.year);
    if (ec != std::errc() || ptr != end || year_text.empty()) {
      throw DataError(LineError(line, "unparseable year '" + year_text + "'"));
    }
    e.group = Trim(row[group_col]);
    if (e.group.empty()) throw DataError(LineError(line, "empty group"));
    e.tactics = CollectNonBlank(row, tactic_cols);
    e.targets = CollectNonBlank(row, target_cols);
    e.weapons = CollectNonBlank(row, weapon_cols);
    if (e.tactics.empty()) throw DataError(LineError(line, "no tactic"));
    if (e.targets.empty()) throw DataError(LineError(line, "no target"));
    if (e.weapons.empty()) throw DataError(LineError(line, "no weapon"));
    e.region = Trim(row[region_col]);
    e.doubt_flag = ParseDoubt(row[doubt_col], line);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<EventRecord> ParseEvents(const std::filesystem::path& path,
                                     const EventSchema& schema) {
  auto in = OpenOrThrow(path);
  return ParseEvents(in, schema);
}

std::vector<GroupMetadata> ParseMetadata(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.Next(row)) throw DataError("metadata file is empty");
  const csv::Header header(row);
  const std::size_t group_col = Require(header, "group");
  const std::size_t ideology_col = Require(header, "ideology");
  const std::size_t region_col = Require(header, "region");
  const std::size_t width = header.names().size();

  std::vector<GroupMetadata> out;
  std::set<std::string> seen;
  while (reader.Next(row)) {
    if (row.size() == 1 && Trim(row[0]).empty()) continue;
    if (row.size() < width) row.resize(width);
    GroupMetadata m{Trim(row[group_col]), Trim(row[ideology_col]), Trim(row[region_col])};
    if (m.group.empty()) throw DataError(LineError(reader.line(), "empty group"));
    if (!seen.insert(m.group).second) {
      throw DataError(LineError(reader.line(), "duplicate metadata for group '" + m.group + "'"));
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<GroupMetadata> ParseMetadata(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseMetadata(in);
}

std::vector<EventRecord> RestrictToYears(std::span<const EventRecord> events, YearRange years) {
  std::vector<EventRecord> out;
  for (const auto& e : events) {
    if (years.Contains(e.year)) out.push_back(e);
  }
  return out;
}

const std::set<std::string>& DefaultExcludedActors() {
  static const std::set<std::string> kExcluded{
      "Unknown", "Gunmen", "Separatists", "Militants", "Tribesmen", "Anti-Muslim Extremists"};
  return kExcluded;
}

std::vector<EventRecord> FilterSample(std::span<const EventRecord> events, int min_attacks,
                                      const std::set<std::string>& excluded_actors) {
  if (min_attacks < 1) throw ConfigError("min_attacks must be >= 1");
  auto kept = [&](const EventRecord& e) {
    return !e.doubt_flag && !excluded_actors.contains(e.group);
  };
  std::unordered_map<std::string, int> counts;
  for (const auto& e : events) {
    if (kept(e)) ++counts[e.group];
  }
  std::vector<EventRecord> out;
  for (const auto& e : events) {
    if (kept(e) && counts[e.group] >= min_attacks) out.push_back(e);
  }
  return out;
}

const CategoryUniverse& DefaultUniverse() {
  static const CategoryUniverse kUniverse{{{
      {"Armed Assault", "Assassination", "Bombing/Explosion", "Facility/Infrastructure Attack",
       "Hijacking", "Hostage Taking (Barricade Incident)", "Hostage Taking (Kidnapping)",
       "Unarmed Assault", "Unknown"},
      {"Abortion Related", "Airports & Aircraft", "Business", "Educational Institution",
       "Food or Water Supply", "Government (Diplomatic)", "Government (General)",
       "Journalists & Media", "Maritime", "Military", "NGO", "Other", "Police",
       "Private Citizens & Property", "Religious Figures/Institutions", "Telecommunication",
       "Terrorists/Non-State Militia", "Tourists", "Transportation", "Unknown", "Utilities",
       "Violent Political Party"},
      {"Biological", "Chemical", "Explosives", "Fake Weapons", "Firearms", "Incendiary", "Melee",
       "Other", "Sabotage Equipment", "Unknown", "Vehicle"},
  }}};
  return kUniverse;
}

YearSlice YearSlice::Restrict(std::span<const std::size_t> rows) const {
  YearSlice out;
  out.year = year;
  out.groups.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= groups.size()) throw ContractError("row index out of range");
    out.groups.push_back(groups[r]);
  }
  for (std::size_t v = 0; v < kNumViews; ++v) {
    out.views[v].resize(static_cast<Eigen::Index>(rows.size()), views[v].cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out.views[v].row(static_cast<Eigen::Index>(k)) =
          views[v].row(static_cast<Eigen::Index>(rows[k]));
    }
  }
  return out;
}

MultiViewDataset::MultiViewDataset(std::vector<YearSlice> slices,
                                   std::array<std::vector<std::string>, kNumViews> vocabularies,
                                   std::map<std::string, GroupMetadata> metadata)
    : slices_(std::move(slices)),
      vocabularies_(std::move(vocabularies)),
      metadata_(std::move(metadata)) {
  std::sort(slices_.begin(), slices_.end(),
            [](const YearSlice& a, const YearSlice& b) { return a.year < b.year; });
  for (const auto& s : slices_) years_.push_back(s.year);
}

const YearSlice& MultiViewDataset::slice(int year) const {
  auto it = std::lower_bound(years_.begin(), years_.end(), year);
  if (it == years_.end() || *it != year) {
    throw ConfigError("year " + std::to_string(year) + " not present in dataset");
  }
  return slices_[static_cast<std::size_t>(it - years_.begin())];
}

bool MultiViewDataset::has_year(int year) const {
  return std::binary_search(years_.begin(), years_.end(), year);
}

const GroupMetadata& MultiViewDataset::metadata(const std::string& group) const {
  auto it = metadata_.find(group);
  if (it == metadata_.end()) {
    throw ContractError("no metadata entry for group '" + group + "'");
  }
  return it->second;
}

void MultiViewDataset::WriteDump(const std::filesystem::path& dir,
                                 std::string_view header_comment) const {
  std::filesystem::create_directories(dir);
  for (const auto& s : slices_) {
    for (View view : kAllViews) {
      const auto path = dir / (std::to_string(s.year) + "_" + std::string(ViewName(view)) + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw DataError("cannot write " + path.string());
      if (!header_comment.empty()) out << "# " << header_comment << '\n';
      std::vector<std::string> row{"group"};
      const auto& vocab = vocabulary(view);
      row.insert(row.end(), vocab.begin(), vocab.end());
      csv::WriteRow(out, row);
      const auto& m = s.matrix(view);
      for (std::size_t g = 0; g < s.groups.size(); ++g) {
        row.assign(1, s.groups[g]);
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          row.push_back(std::to_string(m(static_cast<Eigen::Index>(g), c)));
        }
        csv::WriteRow(out, row);
      }
    }
  }
}

MultiViewDataset BuildDataset(std::span<const EventRecord> events,
                              std::span<const GroupMetadata> metadata, YearRange years,
                              const CategoryUniverse& universe) {
  if (years.empty()) throw ConfigError("empty year range");

  std::array<std::vector<std::string>, kNumViews> vocab;
  std::array<std::unordered_map<std::string, Eigen::Index>, kNumViews> column;
  for (View view : kAllViews) {
    const std::size_t v = ViewIndex(view);
    std::set<std::string> cats(universe.categories[v].begin(), universe.categories[v].end());
    for (const auto& e : events) {
      if (!years.Contains(e.year)) continue;
      cats.insert(e.categories(view).begin(), e.categories(view).end());
    }
    vocab[v].assign(cats.begin(), cats.end());
    for (std::size_t c = 0; c < vocab[v].size(); ++c) {
      column[v][vocab[v][c]] = static_cast<Eigen::Index>(c);
    }
  }

  // year -> group -> events
  std::map<int, std::map<std::string, std::vector<const EventRecord*>>> by_year;
  for (const auto& e : events) {
    if (years.Contains(e.year)) by_year[e.year][e.group].push_back(&e);
  }

  std::vector<YearSlice> slices;
  for (const auto& [year, groups] : by_year) {
    YearSlice s;
    s.year = year;
    for (const auto& [name, _] : groups) s.groups.push_back(name);
    const auto n = static_cast<Eigen::Index>(s.groups.size());
    for (std::size_t v = 0; v < kNumViews; ++v) {
      s.views[v] = CountMatrix::Zero(n, static_cast<Eigen::Index>(vocab[v].size()));
    }
    Eigen::Index row = 0;
    for (const auto& [name, group_events] : groups) {
      for (const EventRecord* e : group_events) {
        for (View view : kAllViews) {
          const std::size_t v = ViewIndex(view);
          for (const auto& cat : e->categories(view)) s.views[v](row, column[v].at(cat)) += 1;
        }
      }
      ++row;
    }
    slices.push_back(std::move(s));
  }

  std::map<std::string, GroupMetadata> meta;
  for (const auto& m : metadata) meta[m.group] = m;
  for (const auto& [year, groups] : by_year) {
    for (const auto& [name, _] : groups) {
      if (!meta.contains(name)) meta[name] = GroupMetadata{name, kUnknownCategory, kUnknownCategory};
    }
  }
  return MultiViewDataset(std::move(slices), std::move(vocab), std::move(meta));
}

}  // namespace mvmc::ingest
