// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evoim/bench.hpp"
#include "evoim/error.hpp"
#include "evoim/evolution.hpp"
#include "evoim/selection.hpp"

using namespace evoim;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct GraphSource {
  std::string graph;
  std::string temporal;
  std::optional<Timestamp> cut;
  bool reverse_edges = false;

  void add_options(CLI::App* app) {
    app->add_option("--graph", graph, "edge list (src dst per line)");
    app->add_option("--temporal", temporal, "timestamped edge list (src dst time per line)");
    app->add_option("--cut", cut, "snapshot time for --temporal");
    app->add_flag("--reverse-edges", reverse_edges, "flip every edge on load");
  }

  Graph load() const {
    ReadOptions options;
    options.reverse_edges = reverse_edges;
    if (!graph.empty()) return load_graph_file(graph, options);
    if (temporal.empty()) throw ConfigError("one of --graph or --temporal is required");
    if (!cut) throw ConfigError("--temporal needs --cut");
    return load_temporal_file(temporal, options).snapshot_at(*cut);
  }
};

struct FfmOptions {
  std::string preset = "synthetic";
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::string distribution = "geometric";
  std::uint32_t binomial_cap = 10;
  bool recurse_backward = false;
  std::string params_file;

  void add_options(CLI::App* app) {
    app->add_option("--preset", preset, "synthetic | hep | patents")
        ->check(CLI::IsMember({"synthetic", "hep", "patents"}));
    app->add_option("--alpha", alpha, "forward burning probability");
    app->add_option("--gamma", gamma, "backward burning ratio");
    app->add_option("--distribution", distribution, "geometric | binomial")
        ->check(CLI::IsMember({"geometric", "binomial"}));
    app->add_option("--binomial-cap", binomial_cap, "trials of the binomial burn count");
    app->add_flag("--recurse-backward", recurse_backward, "keep burning from backward links");
    app->add_option("--params", params_file, "fitted parameter file (from `fit`)");
  }

  FfmParams resolve() const {
    FfmParams p = preset == "hep"       ? FfmParams::hep_preset()
                  : preset == "patents" ? FfmParams::patents_preset()
                                        : FfmParams::synthetic_preset();
    if (!params_file.empty()) {
      std::ifstream in(params_file);
      if (!in) throw DataError("cannot open " + params_file);
      std::ostringstream text;
      text << in.rdbuf();
      p = parse_ffm_params(text.str());
    } else {
      p.distribution = distribution == "binomial" ? BurnDistribution::kBinomial
                                                  : BurnDistribution::kGeometric;
      p.binomial_cap = binomial_cap;
      p.recurse_backward = recurse_backward;
    }
    if (alpha) p.alpha = *alpha;
    if (gamma) p.gamma = *gamma;
    try {
      p.validate();
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
    return p;
  }
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed selection for influence maximization on evolving networks"};
  app.require_subcommand(1);

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "grow a graph by Forest Fire arrivals");
  GraphSource evolve_src;
  evolve_src.add_options(evolve_cmd);
  FfmOptions evolve_ffm;
  evolve_ffm.add_options(evolve_cmd);
  NodeId evolve_nodes = 0;
  std::vector<std::uint64_t> evolve_snapshots;
  std::uint64_t evolve_seed = 1;
  std::string evolve_out = ".";
  evolve_cmd->add_option("--nodes", evolve_nodes, "grow the start graph from one node instead");
  evolve_cmd->add_option("--arrivals", evolve_snapshots, "arrival counts to snapshot (a,b,...)")
      ->delimiter(',')
      ->required();
  evolve_cmd->add_option("--seed", evolve_seed);
  evolve_cmd->add_option("--out", evolve_out, "output directory");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit Forest Fire parameters to snapshots");
  std::vector<std::string> fit_snapshots;
  std::string fit_temporal;
  std::vector<Timestamp> fit_cuts;
  bool fit_reverse = false;
  double fit_step = 0.05;
  std::uint32_t fit_seeds = 5;
  std::uint64_t fit_seed = 1;
  std::string fit_out;
  fit_cmd->add_option("--snapshot", fit_snapshots, "edge list per snapshot, oldest first");
  fit_cmd->add_option("--temporal", fit_temporal, "timestamped edge list");
  fit_cmd->add_option("--cuts", fit_cuts, "snapshot times for --temporal")->delimiter(',');
  fit_cmd->add_flag("--reverse-edges", fit_reverse);
  fit_cmd->add_option("--step", fit_step, "grid step for alpha and gamma");
  fit_cmd->add_option("--seeds-per-point", fit_seeds, "simulations per grid point");
  fit_cmd->add_option("--seed", fit_seed);
  fit_cmd->add_option("--out", fit_out, "parameter file (stdout when omitted)");

  // select
  auto* select_cmd = app.add_subcommand("select", "pick seeds on a snapshot");
  GraphSource select_src;
  select_src.add_options(select_cmd);
  FfmOptions select_ffm;
  select_ffm.add_options(select_cmd);
  std::string select_algo = "seer";
  SelectionConfig select_cfg;
  std::optional<std::uint64_t> select_theta;
  std::uint64_t select_arrivals = 0;
  std::uint64_t select_seed = 1;
  std::string select_filter = "v0";
  std::string select_aggregation = "borda";
  std::string select_out;
  select_cmd->add_option("--algo", select_algo, "genie | seer | greedy | degree")
      ->check(CLI::IsMember({"genie", "seer", "greedy", "degree"}));
  select_cmd->add_option("--k", select_cfg.k, "number of seeds");
  select_cmd->add_option("--p", select_cfg.p, "edge propagation probability");
  select_cmd->add_option("--I", select_cfg.instances, "predicted instances (genie)");
  select_cmd->add_option("--R", select_cfg.rounds, "samples per seed round (genie, greedy)");
  select_cmd->add_option("--theta", select_theta, "RR instances (seer); default from epsilon");
  select_cmd->add_option("--epsilon", select_cfg.theta.epsilon);
  select_cmd->add_option("--rr-per-instance", select_cfg.rr_sets_per_instance);
  select_cmd->add_option("--arrivals", select_arrivals, "predicted node arrivals");
  select_cmd->add_option("--seed", select_seed);
  select_cmd->add_option("--candidate-filter", select_filter, "v0 | all")
      ->check(CLI::IsMember({"v0", "all"}));
  select_cmd->add_option("--aggregation", select_aggregation, "borda | raw_sum")
      ->check(CLI::IsMember({"borda", "raw_sum"}));
  select_cmd->add_option("--out", select_out, "seed record file (stdout when omitted)");

  // spread
  auto* spread_cmd = app.add_subcommand("spread", "evaluate seed records on a graph");
  GraphSource spread_src;
  spread_src.add_options(spread_cmd);
  std::string spread_seeds;
  CascadeConfig spread_cfg;
  std::uint64_t spread_seed = 1;
  spread_cmd->add_option("--seeds", spread_seeds, "seed record file")->required();
  spread_cmd->add_option("--p", spread_cfg.p);
  spread_cmd->add_option("--rounds", spread_cfg.rounds);
  spread_cmd->add_option("--seed", spread_seed);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "run a comparison experiment");
  std::string compare_config;
  std::string compare_out;
  compare_cmd->add_option("--config", compare_config, "key = value experiment file")->required();
  compare_cmd->add_option("--out", compare_out, "report directory");

  // theorem1
  auto* theorem_cmd =
      app.add_subcommand("theorem1", "replicated-network counterexample for static greedy");
  NodeId theorem_n = 10;
  std::uint32_t theorem_k = 5;
  std::uint32_t theorem_copies = 7;
  theorem_cmd->add_option("--n", theorem_n, "nodes per copy");
  theorem_cmd->add_option("--k", theorem_k);
  theorem_cmd->add_option("--copies", theorem_copies);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*evolve_cmd) {
      FfmParams ffm = evolve_ffm.resolve();
      ffm.reverse_orientation = evolve_src.reverse_edges;
      const Graph start = evolve_nodes > 0
                              ? grow_from_single_node(evolve_nodes, ffm, derive_seed(evolve_seed, 0))
                              : evolve_src.load();
      if (start.num_nodes() == 0) throw DataError("start graph is empty");
      std::vector<std::uint64_t> counts = evolve_snapshots;
      if (!std::is_sorted(counts.begin(), counts.end())) {
        throw ConfigError("--arrivals must be non-decreasing");
      }
      fs::create_directories(evolve_out);
      GrowthOverlay overlay(start);
      SplitMix64 rng(derive_seed(evolve_seed, 1));
      std::uint64_t grown = 0;
      for (std::uint64_t target : counts) {
        FfmParams step = ffm;
        step.arrivals = target - grown;
        if (step.arrivals > 0) overlay.grow(step, rng);
        grown = target;
        const Graph snap = overlay.materialize();
        const fs::path path = fs::path(evolve_out) / ("snapshot_" + std::to_string(target) + ".txt");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        // Written in the orientation of the input file.
        write_edge_list(evolve_src.reverse_edges ? snap.reversed() : snap, out);
        std::cout << path.string() << '\t' << snap.num_nodes() << " nodes\t" << snap.num_edges()
                  << " edges\n";
      }
    } else if (*fit_cmd) {
      std::vector<Graph> snapshots;
      ReadOptions options;
      options.reverse_edges = fit_reverse;
      if (!fit_temporal.empty()) {
        const TemporalGraph stream = load_temporal_file(fit_temporal, options);
        for (Timestamp cut : fit_cuts) snapshots.push_back(stream.snapshot_at(cut));
      }
      for (const auto& path : fit_snapshots) snapshots.push_back(load_graph_file(path, options));
      FitGrid grid = FitGrid::uniform(fit_step);
      grid.seeds_per_point = fit_seeds;
      FfmParams base;
      base.reverse_orientation = fit_reverse;
      FitResult fit = fit_parameters(snapshots, grid, fit_seed, base);
      // The orientation belongs to how the data was read, not to the model.
      fit.params.reverse_orientation = false;
      std::ofstream file;
      output_stream(fit_out, file) << format_ffm_params(fit.params);
      std::cerr << "objective " << fit.objective << '\n';
    } else if (*select_cmd) {
      const Graph g = select_src.load();
      const Algorithm algo = *parse_algorithm(select_algo);
      select_cfg.ffm = select_ffm.resolve();
      select_cfg.ffm.reverse_orientation = select_src.reverse_edges;
      select_cfg.ffm.arrivals = select_arrivals;
      select_cfg.theta.theta_override = select_theta;
      select_cfg.restrict_to_current = select_filter == "v0";
      select_cfg.aggregation =
          select_aggregation == "borda" ? RankAggregation::kBorda : RankAggregation::kRawSum;
      if (select_cfg.k < 1 || select_cfg.k > g.num_nodes()) {
        throw ConfigError("--k must lie in 1.." + std::to_string(g.num_nodes()));
      }
      const RankedSeedSet seeds = run_selection(algo, g, select_cfg, select_seed);
      const SeedRecord record = make_seed_record(select_algo, selection_config_json(algo, select_cfg),
                                                 select_seed, g, seeds);
      std::ofstream file;
      output_stream(select_out, file) << format_seed_record(record) << '\n';
    } else if (*spread_cmd) {
      const Graph g = spread_src.load();
      spread_cfg.validate();
      const auto lines = read_lines(spread_seeds);
      if (lines.empty()) throw DataError(spread_seeds + " holds no seed records");
      for (std::size_t i = 0; i < lines.size(); ++i) {
        SeedRecord record;
        try {
          record = parse_seed_record(lines[i]);
        } catch (const ParseError& e) {
          throw ParseError(i + 1, spread_seeds + ": " + e.what());
        }
        const SeedSet seeds = resolve_seeds(record, g);
        const SpreadEstimate est = estimate_spread(g, seeds, spread_cfg, spread_seed);
        if (est.absent_seeds > 0) {
          std::cerr << "warning: " << est.absent_seeds
                    << " seed(s) not in the graph; counted as zero spread\n";
        }
        std::printf("%s\tk=%zu\tmean=%.4f\tsd=%.4f\tse=%.4f\tabsent=%zu\n",
                    record.algorithm.c_str(), seeds.size(), est.mean, est.stddev, est.std_error,
                    est.absent_seeds);
      }
    } else if (*compare_cmd) {
      const ExperimentConfig cfg = ExperimentConfig::from_key_values(KeyValues::load(compare_config));
      const ExperimentReport report = run_comparison(cfg);
      if (!compare_out.empty()) write_report(report, compare_out);
      print_report(report, std::cout);
    } else if (*theorem_cmd) {
      const Theorem1Result r = theorem1_scenario(theorem_n, theorem_k, theorem_copies);
      std::printf("sigma_classical = %llu\nsigma_optimal = %llu\nbound = %.4f\nbound_holds = %s\n",
                  static_cast<unsigned long long>(r.sigma_classical),
                  static_cast<unsigned long long>(r.sigma_optimal), r.bound,
                  r.bound_holds ? "true" : "false");
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
