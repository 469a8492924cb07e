#include "mvmc/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mvmc/csv.hpp"
#include "mvmc/network_stats.hpp"

namespace mvmc::pipeline {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatNumber(double x) {
  std::ostringstream out;
  out << std::setprecision(12) << x;
  return out.str();
}

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string CommentLine(const PipelineConfig& config) {
  return "mvmc config_hash=" + config.Hash() + " seed=" + std::to_string(config.seed);
}

Json Meta(const PipelineConfig& config, std::optional<int> year = std::nullopt) {
  Json meta;
  meta["config_hash"] = config.Hash();
  meta["seed"] = config.seed;
  if (year) meta["year"] = *year;
  return meta;
}

void WriteJson(const std::filesystem::path& path, const Json& doc) {
  auto out = OpenOutput(path);
  out << doc.dump(2) << '\n';
}

Json PerView(const std::vector<double>& values) {
  Json obj = Json::object();
  for (View v : kAllViews) {
    if (ViewIndex(v) < values.size()) obj[std::string(ViewName(v))] = values[ViewIndex(v)];
  }
  return obj;
}

Json PartitionJson(const Partition& p, const std::vector<std::string>& groups) {
  Json doc;
  Json labels = Json::object();
  for (std::size_t i = 0; i < groups.size() && i < p.labels.size(); ++i) labels[groups[i]] = p.labels[i];
  doc["labels"] = labels;
  doc["gammas"] = PerView(p.gammas);
  doc["weights"] = PerView(p.weights);
  doc["modularity"] = p.modularity;
  doc["converged"] = p.converged;
  doc["iterations"] = p.iterations;
  doc["n_clusters"] = NumClusters(p.labels);
  return doc;
}

std::vector<std::string> Subset(const std::vector<std::string>& names,
                                const std::vector<std::size_t>& rows) {
  std::vector<std::string> out;
  for (std::size_t r : rows) out.push_back(names[r]);
  return out;
}

Partition TrivialPartition(std::size_t n) {
  Partition p;
  p.labels.assign(n, 0);
  p.gammas.assign(kNumViews, 1.0);
  p.weights.assign(kNumViews, 1.0);
  p.converged = true;
  return p;
}

std::vector<int> SelectYears(const ingest::MultiViewDataset& ds) { return ds.years(); }

std::vector<YearConsensus> ComputeAllConsensus(const LoadedData& data,
                                               const PipelineConfig& config) {
  const auto years = SelectYears(data.dataset);
  std::vector<YearConsensus> out(years.size());
  // Years run in parallel; ensemble members inside a year run sequentially.
  ParallelFor(years.size(), config.jobs, [&](std::size_t i) {
    out[i] = ComputeConsensus(data.dataset.slice(years[i]), config, 1);
  });
  return out;
}

void WriteGraphFiles(const PipelineConfig& config, int year, const ViewGraphs& graphs,
                     const std::vector<std::string>& groups) {
  for (View view : kAllViews) {
    const auto& g = graphs[ViewIndex(view)];
    const std::string stem = "graph_" + std::to_string(year) + "_" + std::string(ViewName(view));
    auto out = OpenOutput(config.out_dir / (stem + ".csv"));
    out << "# " << CommentLine(config) << '\n';
    out << "src,dst,weight\n";
    for (const auto& e : g.edges) {
      out << csv::Escape(groups[static_cast<std::size_t>(e.i)]) << ','
          << csv::Escape(groups[static_cast<std::size_t>(e.j)]) << ',' << FormatNumber(e.weight)
          << '\n';
    }
    Json side;
    side["radius"] = g.radius;
    side["sigma"] = g.sigma;
    side["n_nodes"] = g.num_nodes;
    side["n_edges"] = g.edges.size();
    side["view"] = std::string(ViewName(view));
    side["year"] = year;
    side["meta"] = Meta(config, year);
    WriteJson(config.out_dir / (stem + ".json"), side);
  }
}

void WriteConsensusJson(const PipelineConfig& config, const YearConsensus& yc) {
  Json doc = PartitionJson(yc.consensus, yc.groups);
  doc["runs"] = yc.ensemble.runs.size();
  doc["agreement"] = yc.agreement;
  Json seeds = Json::array();
  for (auto s : yc.ensemble.seeds) seeds.push_back(s);
  doc["run_seeds"] = seeds;
  doc["meta"] = Meta(config, yc.year);
  WriteJson(config.out_dir / ("consensus_" + std::to_string(yc.year) + ".json"), doc);
}

void WriteStabilityCsv(const PipelineConfig& config, const std::vector<YearConsensus>& all,
                       stability::Metric metric) {
  std::vector<stability::YearClustering> years;
  for (const auto& yc : all) {
    stability::YearClustering c{yc.year, {}};
    for (std::size_t i = 0; i < yc.groups.size(); ++i) c.labels[yc.groups[i]] = yc.consensus.labels[i];
    years.push_back(std::move(c));
  }
  const auto matrix = stability::ComputeStabilityMatrix(years, metric);
  auto out = OpenOutput(config.out_dir /
                        ("stability_" + std::string(stability::MetricName(metric)) + ".csv"));
  out << "# " << CommentLine(config) << '\n';
  out << "year";
  for (const auto& y : years) out << ',' << y.year;
  out << '\n';
  for (std::size_t i = 0; i < years.size(); ++i) {
    out << years[i].year;
    for (std::size_t j = 0; j < years.size(); ++j) {
      out << ',';
      if (matrix[i][j]) out << FormatNumber(*matrix[i][j]);
    }
    out << '\n';
  }
}

void WriteStatsCsv(const PipelineConfig& config, const std::vector<YearConsensus>& all) {
  auto out = OpenOutput(config.out_dir / "rbg_stats.csv");
  out << "# " << CommentLine(config) << '\n';
  out << "year,view,density,clustering,components,assortativity,isolates\n";
  for (const auto& yc : all) {
    if (!yc.graphs) continue;
    for (View view : kAllViews) {
      const auto s = netstats::ComputeGraphStats((*yc.graphs)[ViewIndex(view)]);
      out << yc.year << ',' << ViewName(view) << ',' << FormatNumber(s.density) << ','
          << FormatNumber(s.clustering_coefficient) << ',' << s.n_components << ',';
      if (s.degree_assortativity) out << FormatNumber(*s.degree_assortativity);
      out << ',' << s.n_isolates << '\n';
    }
  }

  std::vector<netstats::YearPartition> parts;
  for (const auto& yc : all) parts.push_back({yc.year, yc.consensus.labels});
  const auto trend = netstats::ClusterTrend(parts);
  auto tout = OpenOutput(config.out_dir / "cluster_trend.csv");
  tout << "# " << CommentLine(config) << '\n';
  tout << "year,n_clusters,n_groups,ratio,n_isolates\n";
  for (const auto& r : trend) {
    tout << r.year << ',' << r.n_clusters << ',' << r.n_groups << ',' << FormatNumber(r.ratio)
         << ',' << r.n_isolates << '\n';
  }
}

Json FitErgmJson(const PipelineConfig& config, const LoadedData& data, const YearConsensus& yc) {
  const auto& slice = data.dataset.slice(yc.year);
  const auto covariates = ergm::BuildCovariates(slice, data.dataset);
  const auto network = ergm::BipartiteClusterNetwork::FromLabels(yc.consensus.labels);
  const auto terms = ergm::DefaultTerms();
  const auto model = ergm::MpleFit(network, terms, covariates, config.ergm_intercept);
  Json doc;
  doc["year"] = yc.year;
  doc["terms"] = model.terms;
  auto vec = [](const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
  };
  doc["theta"] = vec(model.theta);
  doc["std_errors"] = vec(model.std_errors);
  doc["z"] = vec(model.z());
  doc["p_values"] = vec(model.p_values());
  doc["log_pseudo_likelihood"] = model.log_pseudo_likelihood;
  doc["aic"] = model.aic;
  doc["bic"] = model.bic;
  doc["n_dyads"] = model.n_dyads;
  doc["n_groups"] = network.num_groups();
  doc["n_clusters"] = network.num_clusters();
  doc["iterations"] = model.iterations;
  doc["meta"] = Meta(config, yc.year);
  return doc;
}

// Runs one pipeline stage and prefixes any failure with the stage name while
// keeping the error category (and so the exit code) intact.
template <typename Fn>
auto Stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("[") + name + "] ";
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const EstimationError& e) {
    throw EstimationError(prefix + e.what());
  } catch (const ContractError& e) {
    throw ContractError(prefix + e.what());
  }
}

}  // namespace

void PipelineConfig::Validate() const {
  if (events.empty()) throw ConfigError("--events is required");
  if (min_attacks < 1) throw ConfigError("min_attacks must be >= 1");
  if (ensemble_runs < 1) throw ConfigError("ensemble runs must be >= 1");
  if (!(mvmc.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (mvmc.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (refine_min < 2) throw ConfigError("refine_min must be >= 2");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (years && years->empty()) throw ConfigError("empty year range");
}

TwoStepOptions PipelineConfig::two_step() const {
  TwoStepOptions o;
  o.metric = metric;
  o.mvmc = mvmc;
  o.refine_min = refine_min;
  return o;
}

std::string PipelineConfig::Hash() const {
  std::ostringstream canon;
  canon << "years=" << (years ? std::to_string(years->first) + ".." + std::to_string(years->last) : "all")
        << ";min_attacks=" << min_attacks << ";excluded=";
  for (const auto& a : excluded_actors) canon << a << '|';
  canon << ";distance=" << learn::MetricName(metric) << ";runs=" << ensemble_runs
        << ";max_iter=" << mvmc.max_iter << ";tol=" << FormatNumber(mvmc.tol)
        << ";start_gamma=" << FormatNumber(mvmc.start_gamma)
        << ";start_weight=" << FormatNumber(mvmc.start_weight) << ";refine_min=" << refine_min
        << ";seed=" << seed << ";intercept=" << ergm_intercept;
  std::uint64_t h = Fnv1a(canon.str());
  h = Fnv1a(ReadFileBytes(events), h);
  if (!metadata.empty()) h = Fnv1a(ReadFileBytes(metadata), h);
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

ingest::YearRange ParseYearRange(std::string_view text) {
  auto parse = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError("bad year range '" + std::string(text) + "' (expected A..B)");
    }
    return v;
  };
  const auto sep = text.find("..");
  if (sep == std::string_view::npos) {
    const int y = parse(text);
    return {y, y};
  }
  ingest::YearRange r{parse(text.substr(0, sep)), parse(text.substr(sep + 2))};
  if (r.empty()) throw ConfigError("empty year range '" + std::string(text) + "'");
  return r;
}

LoadedData Load(const PipelineConfig& config) {
  config.Validate();
  LoadedData out;
  auto events = ingest::ParseEvents(config.events);
  out.events_read = events.size();
  std::vector<ingest::GroupMetadata> metadata;
  if (!config.metadata.empty()) metadata = ingest::ParseMetadata(config.metadata);

  ingest::YearRange range;
  if (config.years) {
    range = *config.years;
  } else if (!events.empty()) {
    auto [lo, hi] = std::minmax_element(events.begin(), events.end(),
                                        [](const auto& a, const auto& b) { return a.year < b.year; });
    range = {lo->year, hi->year};
  }
  events = ingest::RestrictToYears(events, range);
  events = ingest::FilterSample(events, config.min_attacks, config.excluded_actors);
  out.events_kept = events.size();
  if (events.empty()) {
    throw DataError("empty sample: no group reaches " + std::to_string(config.min_attacks) +
                    " attacks after filtering");
  }
  out.dataset = ingest::BuildDataset(events, metadata, range);
  return out;
}

YearConsensus ComputeConsensus(const ingest::YearSlice& slice, const PipelineConfig& config,
                               int jobs) {
  YearConsensus yc;
  yc.year = slice.year;
  yc.groups = slice.groups;
  if (slice.num_groups() < 2) {
    yc.consensus = TrivialPartition(slice.num_groups());
    yc.ensemble.runs.push_back(yc.consensus);
    yc.ensemble.seeds.push_back(config.seed);
    return yc;
  }
  yc.graphs = LearnSliceGraphs(slice, config.metric);
  yc.ensemble = RunEnsemble(slice, config.two_step(), config.ensemble_runs, config.seed, jobs);

  std::vector<Labels> runs;
  for (const auto& p : yc.ensemble.runs) runs.push_back(p.labels);
  yc.agreement = EnsembleAgreement(runs);

  Partition& c = yc.consensus;
  c.labels = BgpaConsensus(runs, config.seed);
  c.gammas.assign(kNumViews, 0.0);
  c.weights.assign(kNumViews, 0.0);
  c.converged = true;
  for (const auto& p : yc.ensemble.runs) {
    for (std::size_t v = 0; v < kNumViews; ++v) {
      c.gammas[v] += p.gammas[v] / static_cast<double>(runs.size());
      c.weights[v] += p.weights[v] / static_cast<double>(runs.size());
    }
    c.converged = c.converged && p.converged;
    c.iterations += p.iterations;
  }
  c.modularity = MultiviewModularity(ToMultiView(*yc.graphs), c.labels, c.gammas, c.weights);
  return yc;
}

void RunIngest(const PipelineConfig& config, std::ostream& log) {
  const auto data = Load(config);
  log << "events read: " << data.events_read << ", kept: " << data.events_kept << '\n';
  for (int y : data.dataset.years()) {
    log << y << ": " << data.dataset.slice(y).num_groups() << " groups\n";
  }
  if (config.dump) data.dataset.WriteDump(config.out_dir, CommentLine(config));
}

void RunGraphs(const PipelineConfig& config, std::ostream& log) {
  const auto data = Load(config);
  const auto years = data.dataset.years();
  std::vector<std::optional<ViewGraphs>> graphs(years.size());
  ParallelFor(years.size(), config.jobs, [&](std::size_t i) {
    const auto& s = data.dataset.slice(years[i]);
    if (s.num_groups() >= 2) graphs[i] = LearnSliceGraphs(s, config.metric);
  });
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (!graphs[i]) continue;
    for (View v : kAllViews) {
      const auto& g = (*graphs[i])[ViewIndex(v)];
      log << years[i] << ' ' << ViewName(v) << ": nodes=" << g.num_nodes
          << " edges=" << g.edges.size() << " radius=" << FormatNumber(g.radius)
          << " sigma=" << FormatNumber(g.sigma) << '\n';
    }
    if (config.dump) WriteGraphFiles(config, years[i], *graphs[i], data.dataset.slice(years[i]).groups);
  }
}

void RunCluster(const PipelineConfig& config, int year, std::ostream& log) {
  const auto data = Load(config);
  const auto& slice = data.dataset.slice(year);
  Json doc;
  if (slice.num_groups() < 2) {
    doc = PartitionJson(TrivialPartition(slice.num_groups()), slice.groups);
  } else {
    const auto result = TwoStepCluster(slice, config.two_step(), config.seed);
    doc = PartitionJson(result.final_partition, slice.groups);
    doc["rough"] = PartitionJson(result.rough, slice.groups);
    if (result.refined) {
      doc["refined"] = PartitionJson(*result.refined, Subset(slice.groups, result.bulk_rows));
    } else {
      doc["refined"] = nullptr;
    }
  }
  doc["meta"] = Meta(config, year);
  WriteJson(config.out_dir / ("clusters_" + std::to_string(year) + ".json"), doc);
  log << year << ": " << slice.num_groups() << " groups, " << doc["n_clusters"].get<int>()
      << " clusters\n";
}

void RunEnsembleStage(const PipelineConfig& config, int year, std::ostream& log) {
  const auto data = Load(config);
  const auto yc = ComputeConsensus(data.dataset.slice(year), config, config.jobs);
  WriteConsensusJson(config, yc);
  log << year << ": " << yc.groups.size() << " groups, " << NumClusters(yc.consensus.labels)
      << " consensus clusters, agreement " << FormatNumber(yc.agreement) << '\n';
}

void RunStability(const PipelineConfig& config, stability::Metric metric, std::ostream& log) {
  const auto data = Load(config);
  const auto all = ComputeAllConsensus(data, config);
  WriteStabilityCsv(config, all, metric);
  log << "stability (" << stability::MetricName(metric) << ") over " << all.size() << " years\n";
}

void RunStats(const PipelineConfig& config, std::ostream& log) {
  const auto data = Load(config);
  const auto all = ComputeAllConsensus(data, config);
  WriteStatsCsv(config, all);
  log << "stats over " << all.size() << " years\n";
}

void RunErgm(const PipelineConfig& config, int year, std::ostream& log) {
  const auto data = Load(config);
  const auto yc = ComputeConsensus(data.dataset.slice(year), config, config.jobs);
  const Json doc = FitErgmJson(config, data, yc);
  WriteJson(config.out_dir / ("ergm_" + std::to_string(year) + ".json"), doc);
  log << year << ": fitted " << doc["terms"].size() << " terms on " << doc["n_dyads"].get<int>()
      << " dyads\n";
}

ergm::Coefficients ReadCoefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open theta file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("theta file " + path.string() + ": " + e.what());
  }
  ergm::Coefficients theta;
  if (doc.contains("terms") && doc.contains("theta")) {
    const auto& terms = doc["terms"];
    const auto& values = doc["theta"];
    if (terms.size() != values.size()) throw ConfigError("theta file: terms/theta length mismatch");
    for (std::size_t i = 0; i < terms.size(); ++i) theta[terms[i].get<std::string>()] = values[i].get<double>();
  } else if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) theta[k] = v.get<double>();
  } else {
    throw ConfigError("theta file: expected an object");
  }
  for (const auto& [name, _] : theta) {
    if (!ergm::ParseTerm(name)) throw ConfigError("theta file: unknown term '" + name + "'");
  }
  return theta;
}

ergm::LogOdds RunPredict(const PipelineConfig& config, const std::filesystem::path& theta_file,
                         const std::string& group_a, const std::string& group_b,
                         std::optional<int> year, std::ostream& log) {
  const auto theta = ReadCoefficients(theta_file);
  if (!year) {
    std::ifstream in(theta_file);
    const Json doc = Json::parse(in);
    if (doc.contains("year")) year = doc["year"].get<int>();
  }
  if (!year) throw ConfigError("--year is required when the theta file carries no year");
  const auto data = Load(config);
  const auto& slice = data.dataset.slice(*year);
  const auto covariates = ergm::BuildCovariates(slice, data.dataset);
  auto find = [&](const std::string& name) -> const ergm::GroupCovariates& {
    for (const auto& c : covariates) {
      if (c.group == name) return c;
    }
    throw ConfigError("group '" + name + "' not active in " + std::to_string(*year));
  };
  const auto result = ergm::CoclusteringLogOdds(find(group_a), find(group_b), theta);
  log << "logit " << FormatNumber(result.logit) << '\n'
      << "probability " << FormatNumber(result.probability) << '\n';
  return result;
}

void RunPipeline(const PipelineConfig& config, std::ostream& log) {
  const auto data = Stage("ingest", [&] {
    auto loaded = Load(config);
    if (config.dump) loaded.dataset.WriteDump(config.out_dir, CommentLine(config));
    return loaded;
  });
  log << "[ingest] events read: " << data.events_read << ", kept: " << data.events_kept
      << ", years: " << data.dataset.years().size() << '\n';

  const auto all = Stage("cluster", [&] { return ComputeAllConsensus(data, config); });
  Stage("graphs", [&] {
    for (const auto& yc : all) {
      if (config.dump && yc.graphs) WriteGraphFiles(config, yc.year, *yc.graphs, yc.groups);
    }
  });
  log << "[graphs] learned view graphs for " << all.size() << " years\n";

  Stage("ensemble", [&] {
    for (const auto& yc : all) {
      // The first ensemble member is the two-step run seeded with `seed`.
      Json doc = PartitionJson(yc.ensemble.runs.front(), yc.groups);
      doc["meta"] = Meta(config, yc.year);
      WriteJson(config.out_dir / ("clusters_" + std::to_string(yc.year) + ".json"), doc);
      WriteConsensusJson(config, yc);
    }
  });
  log << "[ensemble] wrote clusters and consensus for " << all.size() << " years\n";

  Stage("stability", [&] {
    WriteStabilityCsv(config, all, stability::Metric::kAri);
    WriteStabilityCsv(config, all, stability::Metric::kFms);
  });
  log << "[stability] wrote ari and fms matrices\n";

  Stage("stats", [&] { WriteStatsCsv(config, all); });
  log << "[stats] wrote rbg_stats.csv and cluster_trend.csv\n";

  std::vector<Json> ergm_docs(all.size());
  Stage("ergm", [&] {
    ParallelFor(all.size(), config.jobs, [&](std::size_t i) {
      try {
        ergm_docs[i] = FitErgmJson(config, data, all[i]);
      } catch (const EstimationError& e) {
        Json doc;
        doc["year"] = all[i].year;
        doc["error"] = e.what();
        doc["meta"] = Meta(config, all[i].year);
        ergm_docs[i] = doc;
      }
    });
  });
  std::size_t failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (ergm_docs[i].contains("error")) ++failed;
    WriteJson(config.out_dir / ("ergm_" + std::to_string(all[i].year) + ".json"), ergm_docs[i]);
  }
  log << "[ergm] fitted " << all.size() - failed << " of " << all.size() << " years\n";
}

}  // namespace mvmc::pipeline
