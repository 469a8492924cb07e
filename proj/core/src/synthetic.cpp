#include "mvmc/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "mvmc/csv.hpp"

namespace mvmc::synth {
namespace {

const std::vector<std::string> kRegions{"Middle East & North Africa", "South Asia",
                                        "Sub-Saharan Africa", "South America",
                                        "Southeast Asia", "Western Europe"};
const std::vector<std::string> kIdeologies{"Ethno/Nationalist", "Far left", "Isl/Jihadism",
                                           "Left & Ethno"};

// Preference weights over one view's categories.
struct Preference {
  std::vector<double> weights;
};

struct Profile {
  std::array<Preference, kNumViews> views;
};

const std::vector<std::string>& Universe(View v) {
  return ingest::DefaultUniverse().categories[ViewIndex(v)];
}

Profile MakeProfile(std::mt19937_64& rng, bool broad) {
  Profile p;
  for (View v : kAllViews) {
    const auto n = Universe(v).size();
    auto& w = p.views[ViewIndex(v)].weights;
    w.assign(n, broad ? 1.0 : 0.02);
    if (!broad) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      w[pick(rng)] += 6.0;
      w[pick(rng)] += 2.0;
    }
  }
  return p;
}

std::vector<std::string> DrawCategories(std::mt19937_64& rng, const Preference& pref, View v,
                                        int max_count) {
  std::discrete_distribution<std::size_t> dist(pref.weights.begin(), pref.weights.end());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int count = 1;
  while (count < max_count && u(rng) < 0.15) ++count;
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    const auto& cat = Universe(v)[dist(rng)];
    if (std::find(out.begin(), out.end(), cat) == out.end()) out.push_back(cat);
  }
  return out;
}

std::string GroupName(std::string_view prefix, int index) {
  std::ostringstream name;
  name << prefix << ' ' << std::setw(2) << std::setfill('0') << index;
  return name.str();
}

std::string EventId(int year, int serial) {
  std::ostringstream id;
  id << year << std::setw(6) << std::setfill('0') << serial;
  return id.str();
}

// Fixed repertoire: every event of profile p uses the same three categories,
// with a second tactic every other event.
void AppendFixedEvents(std::vector<ingest::EventRecord>& events, const std::string& group,
                       int profile, int year, int count, int& serial) {
  const auto& tactics = Universe(View::kTactic);
  const auto& targets = Universe(View::kTarget);
  const auto& weapons = Universe(View::kWeapon);
  for (int e = 0; e < count; ++e) {
    ingest::EventRecord r;
    r.event_id = EventId(year, serial++);
    r.year = year;
    r.group = group;
    r.tactics = {tactics[static_cast<std::size_t>(profile * 2) % tactics.size()]};
    if (e % 2 == 1) r.tactics.push_back(tactics[static_cast<std::size_t>(profile * 2 + 1) % tactics.size()]);
    r.targets = {targets[static_cast<std::size_t>(profile * 5 + 1) % targets.size()]};
    r.weapons = {weapons[static_cast<std::size_t>(profile * 3 + 2) % weapons.size()]};
    r.region = kRegions[static_cast<std::size_t>(profile) % kRegions.size()];
    events.push_back(std::move(r));
  }
}

}  // namespace

Corpus GenerateCorpus(const CorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  Corpus corpus;

  std::vector<Profile> profiles;
  for (int a = 0; a < options.num_archetypes; ++a) profiles.push_back(MakeProfile(rng, false));
  const Profile broad = MakeProfile(rng, true);

  struct Actor {
    std::string name;
    int profile;  // -1 = broad
    int min_events;
    int max_events;
    std::string region;
  };
  std::vector<Actor> actors;
  std::uniform_int_distribution<std::size_t> pick_region(0, kRegions.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_ideology(0, kIdeologies.size() - 1);
  int index = 1;
  for (int a = 0; a < options.num_archetypes; ++a) {
    for (int g = 0; g < options.groups_per_archetype; ++g) {
      actors.push_back({GroupName("Group", index++), a, 9, 16, kRegions[pick_region(rng)]});
    }
  }
  for (int o = 0; o < options.num_outliers; ++o) {
    actors.push_back({GroupName("Front", o + 1), -1, 70, 130, kRegions[pick_region(rng)]});
  }
  for (int m = 0; m < options.num_minor; ++m) {
    actors.push_back({GroupName("Cell", m + 1), m % std::max(options.num_archetypes, 1), 1, 4,
                      kRegions[pick_region(rng)]});
  }
  for (const auto& a : actors) {
    corpus.metadata.push_back({a.name, kIdeologies[pick_ideology(rng)], a.region});
  }

  std::uniform_real_distribution<double> u(0.0, 1.0);
  int serial = 1;
  auto emit = [&](const std::string& group, const Profile& profile, int year,
                  const std::string& region) {
    ingest::EventRecord r;
    r.event_id = EventId(year, serial++);
    r.year = year;
    r.group = group;
    r.tactics = DrawCategories(rng, profile.views[0], View::kTactic, 3);
    r.targets = DrawCategories(rng, profile.views[1], View::kTarget, 3);
    r.weapons = DrawCategories(rng, profile.views[2], View::kWeapon, 4);
    r.region = region;
    r.doubt_flag = u(rng) < options.doubt_rate;
    corpus.events.push_back(std::move(r));
  };

  for (int year = options.first_year; year <= options.last_year; ++year) {
    for (auto& a : actors) {
      if (a.profile >= 0 && year > options.first_year && u(rng) < options.switch_rate) {
        a.profile = static_cast<int>(rng() % static_cast<std::uint64_t>(options.num_archetypes));
      }
      std::uniform_int_distribution<int> count(a.min_events, a.max_events);
      const Profile& p = a.profile >= 0 ? profiles[static_cast<std::size_t>(a.profile)] : broad;
      for (int e = count(rng); e > 0; --e) emit(a.name, p, year, a.region);
    }
    for (int e = 0; e < options.unattributed_events / std::max(1, options.last_year - options.first_year + 1); ++e) {
      emit(e % 2 == 0 ? "Unknown" : "Gunmen", broad, year, kRegions[pick_region(rng)]);
    }
  }
  return corpus;
}

Corpus DecliningRatioCorpus(std::span<const int> groups_per_year, int num_profiles,
                            int first_year) {
  Corpus corpus;
  int max_groups = 0;
  for (int n : groups_per_year) max_groups = std::max(max_groups, n);
  for (int g = 0; g < max_groups; ++g) {
    corpus.metadata.push_back({GroupName("Group", g + 1), kIdeologies[static_cast<std::size_t>(g) % kIdeologies.size()],
                               kRegions[static_cast<std::size_t>(g % num_profiles) % kRegions.size()]});
  }
  int serial = 1;
  for (std::size_t y = 0; y < groups_per_year.size(); ++y) {
    const int year = first_year + static_cast<int>(y);
    for (int g = 0; g < groups_per_year[y]; ++g) {
      AppendFixedEvents(corpus.events, GroupName("Group", g + 1), g % num_profiles, year, 10, serial);
    }
  }
  return corpus;
}

Corpus ReversionCorpus(int groups_per_profile, int num_profiles, int first_year) {
  Corpus corpus;
  const int n = groups_per_profile * num_profiles;
  for (int g = 0; g < n; ++g) {
    corpus.metadata.push_back({GroupName("Group", g + 1), kIdeologies[static_cast<std::size_t>(g) % kIdeologies.size()],
                               kRegions[static_cast<std::size_t>(g) % kRegions.size()]});
  }
  int serial = 1;
  for (int y = 0; y < 3; ++y) {
    for (int g = 0; g < n; ++g) {
      int profile = g / groups_per_profile;
      if (y == 1) profile = (profile + g % 2) % num_profiles;
      AppendFixedEvents(corpus.events, GroupName("Group", g + 1), profile, first_year + y, 20, serial);
    }
  }
  return corpus;
}

void WriteEventsCsv(std::ostream& out, std::span<const ingest::EventRecord> events) {
  const std::vector<std::string> header{"event_id", "year",    "group",   "tactic1", "tactic2",
                                        "tactic3",  "target1", "target2", "target3", "weapon1",
                                        "weapon2",  "weapon3", "weapon4", "region",  "doubt"};
  csv::WriteRow(out, header);
  std::vector<std::string> row;
  auto append = [&](const std::vector<std::string>& values, std::size_t slots) {
    for (std::size_t i = 0; i < slots; ++i) row.push_back(i < values.size() ? values[i] : "");
  };
  for (const auto& e : events) {
    row = {e.event_id, std::to_string(e.year), e.group};
    append(e.tactics, 3);
    append(e.targets, 3);
    append(e.weapons, 4);
    row.push_back(e.region);
    row.push_back(e.doubt_flag ? "1" : "0");
    csv::WriteRow(out, row);
  }
}

void WriteMetadataCsv(std::ostream& out, std::span<const ingest::GroupMetadata> metadata) {
  csv::WriteRow(out, std::vector<std::string>{"group", "ideology", "region"});
  for (const auto& m : metadata) {
    csv::WriteRow(out, std::vector<std::string>{m.group, m.ideology, m.most_common_region});
  }
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& events_path,
                 const std::filesystem::path& metadata_path) {
  std::ofstream ev(events_path, std::ios::binary);
  if (!ev) throw DataError("cannot write " + events_path.string());
  WriteEventsCsv(ev, corpus.events);
  std::ofstream md(metadata_path, std::ios::binary);
  if (!md) throw DataError("cannot write " + metadata_path.string());
  WriteMetadataCsv(md, corpus.metadata);
}

}  // namespace mvmc::synth
