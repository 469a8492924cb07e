#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "mvmc/ingest.hpp"

namespace mvmc::synth {

struct Corpus {
  std::vector<ingest::EventRecord> events;
  std::vector<ingest::GroupMetadata> metadata;
};

struct CorpusOptions {
  int first_year = 2001;
  int last_year = 2006;
  int num_archetypes = 4;   // operational profiles shared by groups
  int groups_per_archetype = 9;
  int num_outliers = 3;     // very active groups with broad repertoires
  int num_minor = 4;        // groups below the default activity threshold
  double switch_rate = 0.1; // chance a group changes profile between years
  double doubt_rate = 0.02;
  int unattributed_events = 40;  // events credited to generic actors
  std::uint64_t seed = 7;
};

// Events drawn from a small set of latent operational profiles.
Corpus GenerateCorpus(const CorpusOptions& options);

// Fixed number of profiles while the number of active groups grows every
// year; members of a profile share an identical yearly repertoire.
Corpus DecliningRatioCorpus(std::span<const int> groups_per_year, int num_profiles = 3,
                            int first_year = 2001);

// Three years; year 3 restores year 1's grouping of groups into profiles,
// year 2 reshuffles it.
Corpus ReversionCorpus(int groups_per_profile = 8, int num_profiles = 3, int first_year = 2001);

void WriteEventsCsv(std::ostream& out, std::span<const ingest::EventRecord> events);
void WriteMetadataCsv(std::ostream& out, std::span<const ingest::GroupMetadata> metadata);
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& events_path,
                 const std::filesystem::path& metadata_path);

}  // namespace mvmc::synth
