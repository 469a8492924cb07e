#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "mvmc/ensemble.hpp"
#include "mvmc/ergm.hpp"
#include "mvmc/graph_learning.hpp"
#include "mvmc/ingest.hpp"
#include "mvmc/mvmc.hpp"
#include "mvmc/stability.hpp"
#include "mvmc/two_step.hpp"

namespace mvmc::pipeline {

inline constexpr int kDefaultMinAttacks = 50;
inline constexpr int kRobustnessMinAttacks = 30;

struct PipelineConfig {
  std::filesystem::path events;
  std::filesystem::path metadata;  // optional
  std::optional<ingest::YearRange> years;  // all years in the data when unset
  int min_attacks = kDefaultMinAttacks;
  std::set<std::string> excluded_actors = ingest::DefaultExcludedActors();
  learn::DistanceMetric metric = learn::DistanceMetric::kEuclidean;
  int ensemble_runs = 10;
  MvmcOptions mvmc;
  int refine_min = 4;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out_dir = "out";
  bool dump = false;
  bool ergm_intercept = false;

  // Throws ConfigError on an invalid combination.
  void Validate() const;
  TwoStepOptions two_step() const;
  // Hex digest over every setting that influences numeric output plus the
  // input file contents. Excludes jobs and out_dir.
  std::string Hash() const;
};

// Parses "A..B" (or a single year "A").
ingest::YearRange ParseYearRange(std::string_view text);

struct LoadedData {
  ingest::MultiViewDataset dataset;
  std::size_t events_read = 0;
  std::size_t events_kept = 0;
};

// Parse, window, filter and tabulate. Throws DataError("empty sample ...")
// when filtering leaves no events.
LoadedData Load(const PipelineConfig& config);

struct YearConsensus {
  int year = 0;
  std::vector<std::string> groups;
  std::optional<ViewGraphs> graphs;  // absent when fewer than two groups
  ClusterEnsemble ensemble;
  Partition consensus;
  double agreement = 1.0;
};

YearConsensus ComputeConsensus(const ingest::YearSlice& slice, const PipelineConfig& config,
                               int jobs);

// Stage entry points. Each writes its files under config.out_dir, prints a
// short summary to `log`, and throws ConfigError / DataError / EstimationError.
void RunIngest(const PipelineConfig& config, std::ostream& log);
void RunGraphs(const PipelineConfig& config, std::ostream& log);
void RunCluster(const PipelineConfig& config, int year, std::ostream& log);
void RunEnsembleStage(const PipelineConfig& config, int year, std::ostream& log);
void RunStability(const PipelineConfig& config, stability::Metric metric, std::ostream& log);
void RunStats(const PipelineConfig& config, std::ostream& log);
void RunErgm(const PipelineConfig& config, int year, std::ostream& log);
ergm::LogOdds RunPredict(const PipelineConfig& config, const std::filesystem::path& theta_file,
                         const std::string& group_a, const std::string& group_b,
                         std::optional<int> year, std::ostream& log);

// Every stage in order. ERGM failures for individual years are written into
// that year's output instead of aborting the run.
void RunPipeline(const PipelineConfig& config, std::ostream& log);

// Reads coefficients from an `ergm_{Y}.json` file ({terms, theta}) or a flat
// {term: value} object.
ergm::Coefficients ReadCoefficients(const std::filesystem::path& path);

}  // namespace mvmc::pipeline
