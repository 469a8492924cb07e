#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "mvmc/common.hpp"
#include "mvmc/pipeline.hpp"
#include "mvmc/synthetic.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitEstimation = 4;

struct Flags {
  std::string events;
  std::string metadata;
  std::string years;
  int min_attacks = mvmc::pipeline::kDefaultMinAttacks;
  std::string distance = "euclidean";
  int runs = 10;
  int max_iter = 20;
  double tol = 0.01;
  int refine_min = 4;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = "out";
  bool dump = false;
  bool intercept = false;
};

mvmc::pipeline::PipelineConfig MakeConfig(const Flags& f) {
  mvmc::pipeline::PipelineConfig c;
  c.events = f.events;
  c.metadata = f.metadata;
  if (!f.years.empty()) c.years = mvmc::pipeline::ParseYearRange(f.years);
  c.min_attacks = f.min_attacks;
  auto metric = mvmc::learn::ParseMetric(f.distance);
  if (!metric) throw mvmc::ConfigError("unknown distance '" + f.distance + "'");
  c.metric = *metric;
  c.ensemble_runs = f.runs;
  c.mvmc.max_iter = f.max_iter;
  c.mvmc.tol = f.tol;
  c.refine_min = f.refine_min;
  c.seed = f.seed;
  c.jobs = f.jobs > 0 ? f.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  c.out_dir = f.out_dir;
  c.dump = f.dump;
  c.ergm_intercept = f.intercept;
  c.Validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view modularity clustering of attack repertoires"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value config file; command-line flags take precedence");

  // Shared options live on the top-level app so they can appear before or
  // after the subcommand and in the config file without section headers.
  Flags f;
  app.fallthrough();
  app.add_option("--events", f.events, "events CSV");
  app.add_option("--metadata", f.metadata, "group metadata CSV (group, ideology, region)");
  app.add_option("--years", f.years, "year window A..B");
  app.add_option("--min-attacks", f.min_attacks, "minimum attacks per group over the window");
  app.add_option("--distance", f.distance, "euclidean | cosine")
      ->check(CLI::IsMember({"euclidean", "cosine"}));
  app.add_option("--runs", f.runs, "ensemble runs per year");
  app.add_option("--max-iter", f.max_iter, "MVMC iteration cap");
  app.add_option("--tol", f.tol, "MVMC convergence tolerance");
  app.add_option("--refine-min", f.refine_min, "minimum bulk size for the refined pass");
  app.add_option("--seed", f.seed, "base random seed");
  app.add_option("--jobs", f.jobs, "worker threads (default: logical CPUs)");
  app.add_option("--out-dir", f.out_dir, "output directory");
  app.add_flag("--dump", f.dump, "write intermediate matrices and graphs");
  app.add_flag("--ergm-intercept", f.intercept, "add an edges term to ERGM fits");

  int year = 0;
  std::string metric = "ari";
  std::string theta_file;
  std::vector<std::string> pair;
  std::optional<int> predict_year;
  std::string synth_kind = "standard";

  auto* ingest = app.add_subcommand("ingest", "parse, filter and tabulate events");
  auto* graphs = app.add_subcommand("graphs", "learn radius-ball similarity graphs");
  auto* cluster = app.add_subcommand("cluster", "two-step MVMC clustering for one year");
  cluster->add_option("--year", year, "year")->required();
  auto* ensemble = app.add_subcommand("ensemble", "ensemble plus consensus for one year");
  ensemble->add_option("--year", year, "year")->required();
  auto* stab = app.add_subcommand("stability", "year-by-year partition agreement");
  stab->add_option("--metric", metric, "ari | fms")->check(CLI::IsMember({"ari", "fms"}));
  auto* stats = app.add_subcommand("stats", "graph statistics and cluster trend");
  auto* ergm = app.add_subcommand("ergm", "fit the group-cluster ERGM for one year");
  ergm->add_option("--year", year, "year")->required();
  auto* predict = app.add_subcommand("ergm-predict", "co-clustering log-odds for a pair");
  predict->add_option("--theta-file", theta_file, "coefficients JSON")->required();
  predict->add_option("--pair", pair, "A,B")->required()->delimiter(',')->expected(2);
  predict->add_option("--year", predict_year, "year (defaults to the theta file's)");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage");
  auto* synth = app.add_subcommand("synth", "write a synthetic corpus to --out-dir");
  synth->add_option("--kind", synth_kind, "standard | declining | reversion")
      ->check(CLI::IsMember({"standard", "declining", "reversion"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (synth->parsed()) {
      mvmc::synth::Corpus corpus;
      if (synth_kind == "declining") {
        const std::vector<int> sizes = {15, 21, 30, 42};
        corpus = mvmc::synth::DecliningRatioCorpus(sizes);
      } else if (synth_kind == "reversion") {
        corpus = mvmc::synth::ReversionCorpus();
      } else {
        mvmc::synth::CorpusOptions opts;
        if (app.count("--seed") > 0) opts.seed = f.seed;
        corpus = mvmc::synth::GenerateCorpus(opts);
      }
      const std::filesystem::path dir = f.out_dir;
      std::filesystem::create_directories(dir);
      mvmc::synth::WriteCorpus(corpus, dir / "events.csv", dir / "groups.csv");
      std::cout << "wrote " << corpus.events.size() << " events and " << corpus.metadata.size()
                << " groups to " << dir.string() << '\n';
      return 0;
    }

    const auto config = MakeConfig(f);
    if (ingest->parsed()) {
      mvmc::pipeline::RunIngest(config, std::cout);
    } else if (graphs->parsed()) {
      mvmc::pipeline::RunGraphs(config, std::cout);
    } else if (cluster->parsed()) {
      mvmc::pipeline::RunCluster(config, year, std::cout);
    } else if (ensemble->parsed()) {
      mvmc::pipeline::RunEnsembleStage(config, year, std::cout);
    } else if (stab->parsed()) {
      mvmc::pipeline::RunStability(config, *mvmc::stability::ParseMetric(metric), std::cout);
    } else if (stats->parsed()) {
      mvmc::pipeline::RunStats(config, std::cout);
    } else if (ergm->parsed()) {
      mvmc::pipeline::RunErgm(config, year, std::cout);
    } else if (predict->parsed()) {
      mvmc::pipeline::RunPredict(config, theta_file, pair.at(0), pair.at(1), predict_year,
                                 std::cout);
    } else if (pipeline->parsed()) {
      mvmc::pipeline::RunPipeline(config, std::cout);
    }
  } catch (const mvmc::ConfigError& e) {
    std::cerr << "mvmc " << stage << ": config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mvmc::DataError& e) {
    std::cerr << "mvmc " << stage << ": data error: " << e.what() << '\n';
    return kExitData;
  } catch (const mvmc::EstimationError& e) {
    std::cerr << "mvmc " << stage << ": estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "mvmc " << stage << ": data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mvmc " << stage << ": invalid input: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "mvmc " << stage << ": " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return 0;
}
