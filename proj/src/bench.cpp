#include "evoim/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

#include "evoim/error.hpp"
#include "evoim/rng.hpp"

namespace evoim {

namespace {

std::string fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Synthetic data

Graph grow_from_single_node(NodeId nodes, const FfmParams& ffm, std::uint64_t seed) {
  require(nodes >= 1, "need at least one node");
  const Graph single = Graph::from_edges(1, {});
  FfmParams params = ffm;
  params.arrivals = nodes - 1;
  return evolve(single, params, seed).graph;
}

std::vector<Graph> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  require(std::is_sorted(spec.snapshot_arrivals.begin(), spec.snapshot_arrivals.end()),
          "snapshot arrival counts must be non-decreasing");
  const Graph base = grow_from_single_node(spec.seed_nodes, spec.ffm, derive_seed(seed, 0));
  GrowthOverlay overlay(base);
  SplitMix64 rng(derive_seed(seed, 1));
  std::vector<Graph> snapshots;
  std::uint64_t grown = 0;
  for (std::uint64_t target : spec.snapshot_arrivals) {
    FfmParams step = spec.ffm;
    step.arrivals = target - grown;
    if (step.arrivals > 0) overlay.grow(step, rng);
    grown = target;
    snapshots.push_back(overlay.materialize());
  }
  return snapshots;
}

// ---------------------------------------------------------------------------
// Replicated-network counterexample

Theorem1Result theorem1_scenario(NodeId n, std::uint32_t k, std::uint32_t copies) {
  require(k >= 1, "k must be >= 1");
  require(n >= 2 && n >= k + 1, "need n >= max(2, k + 1)");
  require(copies > k, "need more copies than seeds");

  const Graph current = Graph::from_edges(n, {{0, 1}});
  std::vector<Edge> replicated;
  for (std::uint32_t c = 0; c < copies; ++c) replicated.push_back({c * n, c * n + 1});
  const Graph future = Graph::from_edges(n * copies, std::move(replicated));

  // p = 1: a single live-edge sample is the whole graph, so one round is exact.
  const RankedSeedSet classical = select_greedy_static(current, k, 1.0, 1, 0);
  const SeedSet classical_seeds = classical.nodes();  // copy 0 keeps its ids
  const LiveEdgeSample all_live = sample_live_edges(future, 1.0, 0);

  Theorem1Result out;
  out.sigma_classical = spread_on_sample(future, all_live, classical_seeds);

  // Greedy on the future network; it is optimal when it meets the upper bound
  // k * (largest single-node reach).
  const RankedSeedSet best = select_greedy_static(future, k, 1.0, 1, 0);
  out.sigma_optimal = spread_on_sample(future, all_live, best.nodes());
  std::uint64_t single_max = 0;
  for (NodeId v = 0; v < future.num_nodes(); ++v) {
    const NodeId one[] = {v};
    single_max = std::max<std::uint64_t>(single_max, spread_on_sample(future, all_live, one));
  }
  const std::uint64_t upper = std::min<std::uint64_t>(k * single_max, future.num_nodes());
  if (out.sigma_optimal != upper) {
    throw std::logic_error("greedy did not reach the optimum in the replicated network");
  }
  out.bound = (1.0 - 1.0 / std::exp(1.0)) * static_cast<double>(out.sigma_optimal);
  out.bound_holds = static_cast<double>(out.sigma_classical) < out.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Rank scatter

RankScatter rank_scatter(const RankedSeedSet& selected, const RankedSeedSet& truth,
                         std::span<const NodeId> future_to_current, const Graph& future,
                         std::uint32_t top_m) {
  require(top_m <= truth.size(), "top_m exceeds the ground-truth seed count");
  std::map<NodeId, std::uint32_t> selected_rank;
  for (const RankedEntry& e : selected.entries) {
    if (e.rank <= top_m) selected_rank.emplace(e.node, e.rank);
  }
  RankScatter out;
  double total = 0.0;
  for (const RankedEntry& e : truth.entries) {
    if (e.rank > top_m) continue;
    require(e.node < future_to_current.size(), "ground-truth node outside mapping");
    const NodeId current = future_to_current[e.node];
    if (current == kAbsentNode) continue;
    auto it = selected_rank.find(current);
    const std::uint32_t a = it == selected_rank.end() ? top_m + 1 : it->second;
    out.points.push_back({future.label(e.node), a, e.rank});
    total += std::abs(static_cast<double>(a) - static_cast<double>(e.rank));
  }
  if (!out.points.empty()) out.mean_deviation = total / static_cast<double>(out.points.size());
  return out;
}

// ---------------------------------------------------------------------------
// Seed records

SeedRecord make_seed_record(std::string algorithm, std::string config_json, std::uint64_t seed,
                            const Graph& g, const RankedSeedSet& set) {
  SeedRecord record{std::move(algorithm), std::move(config_json), seed, set.padded, {}};
  for (const RankedEntry& e : set.entries) record.seeds.push_back({g.label(e.node), e.rank, e.score});
  return record;
}

std::string format_seed_record(const SeedRecord& record) {
  nlohmann::ordered_json j;
  j["algorithm"] = record.algorithm;
  j["config"] = record.config_json.empty() ? nlohmann::ordered_json::object()
                                           : nlohmann::ordered_json::parse(record.config_json);
  j["seed"] = record.seed;
  j["padded"] = record.padded;
  j["seeds"] = nlohmann::ordered_json::array();
  for (const auto& e : record.seeds) {
    j["seeds"].push_back({{"label", e.label}, {"rank", e.rank}, {"score", e.score}});
  }
  return j.dump();
}

SeedRecord parse_seed_record(const std::string& line) {
  try {
    const auto j = nlohmann::ordered_json::parse(line);
    SeedRecord record;
    record.algorithm = j.at("algorithm").get<std::string>();
    if (j.contains("config")) record.config_json = j.at("config").dump();
    record.seed = j.value("seed", std::uint64_t{0});
    record.padded = j.value("padded", false);
    for (const auto& e : j.at("seeds")) {
      record.seeds.push_back({e.at("label").get<std::string>(), e.at("rank").get<std::uint32_t>(),
                              e.value("score", 0.0)});
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad seed record: ") + e.what());
  }
}

std::string selection_config_json(Algorithm algo, const SelectionConfig& cfg) {
  nlohmann::ordered_json j;
  j["k"] = cfg.k;
  j["p"] = cfg.p;
  if (algo == Algorithm::kGenie || algo == Algorithm::kGreedy) j["R"] = cfg.rounds;
  if (algo == Algorithm::kGenie) {
    j["I"] = cfg.instances;
    j["aggregation"] = cfg.aggregation == RankAggregation::kBorda ? "borda" : "raw_sum";
  }
  if (algo == Algorithm::kSeer) {
    if (cfg.theta.theta_override) j["theta"] = *cfg.theta.theta_override;
    j["epsilon"] = cfg.theta.epsilon;
    j["ell"] = cfg.theta.ell;
    j["candidate_filter"] = cfg.restrict_to_current ? "v0" : "all";
    j["rr_per_instance"] = cfg.rr_sets_per_instance;
  }
  if (algo == Algorithm::kGenie || algo == Algorithm::kSeer) {
    j["alpha"] = cfg.ffm.alpha;
    j["gamma"] = cfg.ffm.gamma;
    j["arrivals"] = cfg.ffm.arrivals;
    j["distribution"] =
        cfg.ffm.distribution == BurnDistribution::kGeometric ? "geometric" : "binomial";
    if (cfg.ffm.recurse_backward) j["recurse_backward"] = true;
    if (cfg.ffm.reverse_orientation) j["reverse_orientation"] = true;
  }
  return j.dump();
}

SeedSet resolve_seeds(const SeedRecord& record, const Graph& g) {
  SeedSet seeds;
  const bool numeric = g.labels().empty();
  for (const auto& e : record.seeds) {
    std::optional<NodeId> id;
    if (numeric) {
      NodeId v = 0;
      auto [ptr, ec] = std::from_chars(e.label.data(), e.label.data() + e.label.size(), v);
      if (ec == std::errc{} && ptr == e.label.data() + e.label.size() && v < g.num_nodes()) id = v;
    } else {
      id = g.labels().find(e.label);
    }
    seeds.push_back(id.value_or(kAbsentNode));
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Experiment configuration

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (eval_rounds < 1 || truth_rounds < 1) throw ConfigError("rounds must be >= 1");
  if (!temporal_path.empty() && (!cut_current || !cut_future)) {
    throw ConfigError("temporal data needs cut_current and cut_future");
  }
  if (!graph_path.empty() && future_graph_path.empty()) {
    throw ConfigError("future_graph is required to evaluate seeds picked on graph");
  }
  if (synthetic() && synthetic_nodes < selection.k) throw ConfigError("synthetic_nodes < k");
  try {
    selection.ffm.validate();
    selection.theta.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  if (selection.k < 1) throw ConfigError("k must be >= 1");
  if (!(selection.p >= 0.0 && selection.p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  if (selection.instances < 1 || selection.rounds < 1) throw ConfigError("I and R must be >= 1");
  if (scatter_top < 1 || scatter_top > selection.k) throw ConfigError("scatter_top must be in 1..k");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.algorithms = {Algorithm::kSeer, Algorithm::kGenie, Algorithm::kGreedy, Algorithm::kDegree};
  cfg.selection.p = 0.01;
  cfg.selection.instances = 500;
  cfg.selection.rounds = 5000;
  cfg.truth_rounds = 5000;
  cfg.eval_rounds = 10000;
  cfg.selection.ffm = FfmParams::synthetic_preset();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& kv) {
  ExperimentConfig cfg = defaults();
  cfg.graph_path = kv.get_string("graph", "");
  cfg.future_graph_path = kv.get_string("future_graph", "");
  cfg.temporal_path = kv.get_string("temporal", "");
  if (kv.contains("cut_current")) cfg.cut_current = kv.get_int("cut_current", 0);
  if (kv.contains("cut_future")) cfg.cut_future = kv.get_int("cut_future", 0);
  cfg.reverse_edges = kv.get_bool("reverse_edges", false);
  cfg.synthetic_nodes = static_cast<NodeId>(kv.get_uint("synthetic_nodes", cfg.synthetic_nodes));
  cfg.growth = kv.get_double("growth", cfg.growth);
  if (kv.contains("arrivals")) cfg.arrivals = kv.get_uint("arrivals", 0);

  cfg.algorithms.clear();
  for (const auto& name : kv.get_list("algorithms", {"seer", "genie", "greedy", "degree"})) {
    auto algo = parse_algorithm(name);
    if (!algo) throw ConfigError("unknown algorithm '" + name + "'");
    cfg.algorithms.push_back(*algo);
  }

  SelectionConfig& s = cfg.selection;
  s.k = static_cast<std::uint32_t>(kv.get_uint("k", s.k));
  s.p = kv.get_double("p", s.p);
  s.instances = static_cast<std::uint32_t>(kv.get_uint("I", s.instances));
  s.rounds = static_cast<std::uint32_t>(kv.get_uint("R", s.rounds));
  if (kv.contains("theta")) s.theta.theta_override = kv.get_uint("theta", 1);
  s.theta.epsilon = kv.get_double("epsilon", s.theta.epsilon);
  s.theta.ell = kv.get_double("ell", s.theta.ell);
  const std::string filter = kv.get_string("candidate_filter", "v0");
  if (filter != "v0" && filter != "all") throw ConfigError("candidate_filter must be v0 or all");
  s.restrict_to_current = filter == "v0";
  s.rr_sets_per_instance = static_cast<std::uint32_t>(kv.get_uint("rr_per_instance", 1));
  const std::string aggregation = kv.get_string("aggregation", "borda");
  if (aggregation != "borda" && aggregation != "raw_sum") {
    throw ConfigError("aggregation must be borda or raw_sum");
  }
  s.aggregation = aggregation == "borda" ? RankAggregation::kBorda : RankAggregation::kRawSum;

  const std::string preset = kv.get_string("preset", "synthetic");
  if (preset == "synthetic") {
    s.ffm = FfmParams::synthetic_preset();
  } else if (preset == "hep") {
    s.ffm = FfmParams::hep_preset();
  } else if (preset == "patents") {
    s.ffm = FfmParams::patents_preset();
  } else {
    throw ConfigError("preset must be synthetic, hep or patents");
  }
  s.ffm.alpha = kv.get_double("alpha", s.ffm.alpha);
  s.ffm.gamma = kv.get_double("gamma", s.ffm.gamma);
  const std::string dist = kv.get_string("distribution", "geometric");
  if (dist != "geometric" && dist != "binomial") {
    throw ConfigError("distribution must be geometric or binomial");
  }
  s.ffm.distribution =
      dist == "geometric" ? BurnDistribution::kGeometric : BurnDistribution::kBinomial;
  s.ffm.binomial_cap = static_cast<std::uint32_t>(kv.get_uint("binomial_cap", 10));
  s.ffm.recurse_backward = kv.get_bool("recurse_backward", false);
  s.ffm.reverse_orientation = cfg.reverse_edges;

  cfg.truth_rounds = static_cast<std::uint32_t>(kv.get_uint("truth_rounds", s.rounds));
  cfg.eval_rounds = kv.get_uint("eval_rounds", cfg.eval_rounds);
  cfg.seed = kv.get_uint("seed", cfg.seed);
  cfg.trials = static_cast<std::uint32_t>(kv.get_uint("trials", cfg.trials));
  cfg.scatter_top = static_cast<std::uint32_t>(
      kv.get_uint("scatter_top", std::min<std::uint32_t>(10, s.k)));

  if (auto unused = kv.unused_keys(); !unused.empty()) {
    throw ConfigError("unknown config key '" + unused.front() + "'");
  }
  cfg.validate();
  return cfg;
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  std::string names;
  for (Algorithm a : algorithms) {
    if (!names.empty()) names += ',';
    names += algorithm_name(a);
  }
  auto line = [&](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  if (!synthetic()) {
    if (!graph_path.empty()) line("graph", graph_path);
    if (!future_graph_path.empty()) line("future_graph", future_graph_path);
    if (!temporal_path.empty()) line("temporal", temporal_path);
    if (cut_current) line("cut_current", std::to_string(*cut_current));
    if (cut_future) line("cut_future", std::to_string(*cut_future));
  } else {
    line("synthetic_nodes", std::to_string(synthetic_nodes));
    line("growth", fixed(growth));
  }
  line("reverse_edges", reverse_edges ? "true" : "false");
  if (arrivals) line("arrivals", std::to_string(*arrivals));
  line("algorithms", names);
  line("k", std::to_string(selection.k));
  line("p", fixed(selection.p));
  line("I", std::to_string(selection.instances));
  line("R", std::to_string(selection.rounds));
  if (selection.theta.theta_override) line("theta", std::to_string(*selection.theta.theta_override));
  line("epsilon", fixed(selection.theta.epsilon));
  line("ell", fixed(selection.theta.ell));
  line("candidate_filter", selection.restrict_to_current ? "v0" : "all");
  line("rr_per_instance", std::to_string(selection.rr_sets_per_instance));
  line("aggregation", selection.aggregation == RankAggregation::kBorda ? "borda" : "raw_sum");
  line("alpha", fixed(selection.ffm.alpha));
  line("gamma", fixed(selection.ffm.gamma));
  line("distribution",
       selection.ffm.distribution == BurnDistribution::kGeometric ? "geometric" : "binomial");
  line("binomial_cap", std::to_string(selection.ffm.binomial_cap));
  line("recurse_backward", selection.ffm.recurse_backward ? "true" : "false");
  line("truth_rounds", std::to_string(truth_rounds));
  line("eval_rounds", std::to_string(eval_rounds));
  line("seed", std::to_string(seed));
  line("trials", std::to_string(trials));
  line("scatter_top", std::to_string(scatter_top));
  return out.str();
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

struct SnapshotPair {
  Graph current;
  Graph future;
  std::vector<NodeId> current_to_future;
  std::vector<NodeId> future_to_current;
};

void link_by_label(SnapshotPair& pair) {
  pair.current_to_future.assign(pair.current.num_nodes(), kAbsentNode);
  pair.future_to_current.assign(pair.future.num_nodes(), kAbsentNode);
  for (NodeId v = 0; v < pair.current.num_nodes(); ++v) {
    if (auto w = pair.future.labels().find(pair.current.label(v))) {
      pair.current_to_future[v] = *w;
      pair.future_to_current[*w] = v;
    }
  }
}

void link_by_prefix(SnapshotPair& pair) {
  pair.current_to_future.resize(pair.current.num_nodes());
  pair.future_to_current.assign(pair.future.num_nodes(), kAbsentNode);
  for (NodeId v = 0; v < pair.current.num_nodes(); ++v) {
    pair.current_to_future[v] = v;
    pair.future_to_current[v] = v;
  }
}

SnapshotPair load_real_pair(const ExperimentConfig& cfg) {
  ReadOptions options;
  options.reverse_edges = cfg.reverse_edges;
  SnapshotPair pair;
  if (!cfg.temporal_path.empty()) {
    const TemporalGraph stream = load_temporal_file(cfg.temporal_path, options);
    pair.current = stream.snapshot_at(*cfg.cut_current);
    pair.future = stream.snapshot_at(*cfg.cut_future);
  } else {
    pair.current = load_graph_file(cfg.graph_path, options);
    pair.future = load_graph_file(cfg.future_graph_path, options);
  }
  if (pair.current.num_nodes() < cfg.selection.k) {
    throw DataError("current snapshot has fewer nodes than k");
  }
  if (pair.future.num_nodes() < cfg.selection.k) {
    throw DataError("future snapshot has fewer nodes than k");
  }
  link_by_label(pair);
  return pair;
}

SnapshotPair synthetic_pair(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  SnapshotPair pair;
  pair.current = grow_from_single_node(cfg.synthetic_nodes, cfg.selection.ffm,
                                       derive_seed(trial_seed, 0));
  FfmParams held_out = cfg.selection.ffm;
  held_out.arrivals =
      static_cast<std::uint64_t>(std::llround(cfg.growth * static_cast<double>(cfg.synthetic_nodes)));
  pair.future = evolve(pair.current, held_out, derive_seed(trial_seed, 1)).graph;
  link_by_prefix(pair);
  return pair;
}

SeedSet to_future(const RankedSeedSet& set, std::span<const NodeId> current_to_future) {
  SeedSet out;
  for (const RankedEntry& e : set.entries) out.push_back(current_to_future[e.node]);
  return out;
}

}  // namespace

ExperimentReport run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;

  std::optional<SnapshotPair> real;
  if (!cfg.synthetic()) real = load_real_pair(cfg);

  for (std::uint32_t t = 0; t < cfg.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(derive_seed(cfg.seed, Stream::kTrial), t);
    SnapshotPair synthetic;
    if (cfg.synthetic()) synthetic = synthetic_pair(cfg, trial_seed);
    const SnapshotPair& pair = real ? *real : synthetic;

    TrialResult trial;
    trial.trial = t;
    trial.current_nodes = pair.current.num_nodes();
    trial.current_edges = pair.current.num_edges();
    trial.future_nodes = pair.future.num_nodes();
    trial.future_edges = pair.future.num_edges();
    const std::uint64_t observed_growth =
        pair.future.num_nodes() > pair.current.num_nodes()
            ? pair.future.num_nodes() - pair.current.num_nodes()
            : 0;
    trial.predicted_arrivals = cfg.arrivals.value_or(observed_growth);

    SelectionConfig selection = cfg.selection;
    selection.ffm.arrivals = trial.predicted_arrivals;
    const std::uint64_t eval_seed = derive_seed(trial_seed, Stream::kEvaluation);
    const CascadeConfig eval{cfg.selection.p, cfg.eval_rounds};

    auto start = std::chrono::steady_clock::now();
    trial.truth = select_greedy_static(pair.future, selection.k, selection.p, cfg.truth_rounds,
                                       derive_seed(trial_seed, Stream::kGroundTruth));
    trial.truth_seconds = seconds_since(start);
    trial.truth_record = make_seed_record(
        "ground_truth", selection_config_json(Algorithm::kGreedy, selection),
        derive_seed(trial_seed, Stream::kGroundTruth), pair.future, trial.truth);
    trial.truth_spread = estimate_spread(pair.future, trial.truth.nodes(), eval, eval_seed);

    for (Algorithm algo : cfg.algorithms) {
      AlgorithmRun run;
      run.algorithm = algo;
      const std::uint64_t algo_seed = derive_seed(derive_seed(trial_seed, Stream::kCascade),
                                                  static_cast<std::uint64_t>(algo));
      start = std::chrono::steady_clock::now();
      run.seeds = run_selection(algo, pair.current, selection, algo_seed);
      run.seconds = seconds_since(start);
      run.record = make_seed_record(std::string(algorithm_name(algo)),
                                    selection_config_json(algo, selection), algo_seed,
                                    pair.current, run.seeds);
      const SeedSet mapped = to_future(run.seeds, pair.current_to_future);
      run.spread = estimate_spread(pair.future, mapped, eval, eval_seed);
      if (run.spread.absent_seeds > 0) {
        std::clog << "warning: " << run.spread.absent_seeds << " " << algorithm_name(algo)
                  << " seed(s) absent from the future snapshot; counted as zero spread\n";
      }
      run.ratio = trial.truth_spread.mean > 0.0 ? run.spread.mean / trial.truth_spread.mean : 0.0;
      run.scatter =
          rank_scatter(run.seeds, trial.truth, pair.future_to_current, pair.future, cfg.scatter_top);
      trial.runs.push_back(std::move(run));
    }
    report.trials.push_back(std::move(trial));
  }
  return report;
}

std::vector<double> ratios_of(const ExperimentReport& report, Algorithm algo) {
  std::vector<double> out;
  for (const TrialResult& t : report.trials) {
    for (const AlgorithmRun& r : t.runs) {
      if (r.algorithm == algo) out.push_back(r.ratio);
    }
  }
  return out;
}

std::vector<AlgorithmSummary> summarize(const ExperimentReport& report) {
  std::vector<AlgorithmSummary> out;
  for (Algorithm algo : report.config.algorithms) {
    AlgorithmSummary s{algo};
    std::vector<double> ratios;
    for (const TrialResult& t : report.trials) {
      for (const AlgorithmRun& r : t.runs) {
        if (r.algorithm != algo) continue;
        ratios.push_back(r.ratio);
        s.mean_deviation += r.scatter.mean_deviation;
        s.mean_seconds += r.seconds;
      }
    }
    const double n = static_cast<double>(ratios.size());
    for (double r : ratios) s.mean_ratio += r;
    s.mean_ratio /= n;
    s.mean_deviation /= n;
    s.mean_seconds /= n;
    if (ratios.size() > 1) {
      double sq = 0.0;
      for (double r : ratios) sq += (r - s.mean_ratio) * (r - s.mean_ratio);
      s.sd_ratio = std::sqrt(sq / (n - 1.0));
    }
    out.push_back(s);
  }
  return out;
}

PairedComparison paired_compare(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "paired comparison needs >= 2 equal-length samples");
  PairedComparison out;
  out.n = a.size();
  const double n = static_cast<double>(out.n);
  for (std::size_t i = 0; i < a.size(); ++i) out.mean_difference += a[i] - b[i];
  out.mean_difference /= n;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i] - out.mean_difference;
    sq += d * d;
  }
  const double se = std::sqrt(sq / (n - 1.0)) / std::sqrt(n);
  if (se == 0.0) {
    out.t_statistic = out.mean_difference > 0 ? INFINITY : (out.mean_difference < 0 ? -INFINITY : 0.0);
    out.p_value = out.mean_difference > 0 ? 0.0 : 1.0;
    return out;
  }
  out.t_statistic = out.mean_difference / se;
  const boost::math::students_t dist(n - 1.0);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  open_output(dir / "config.txt") << report.config.echo();

  auto metrics = open_output(dir / "metrics.csv");
  metrics << "trial,algorithm,current_nodes,current_edges,future_nodes,future_edges,"
             "predicted_arrivals,spread_mean,spread_sd,spread_se,ratio,rank_deviation,"
             "absent_seeds,padded\n";
  auto row = [&](const TrialResult& t, std::string_view name, const SpreadEstimate& s,
                 double ratio, double deviation, bool padded) {
    metrics << t.trial << ',' << name << ',' << t.current_nodes << ',' << t.current_edges << ','
            << t.future_nodes << ',' << t.future_edges << ',' << t.predicted_arrivals << ','
            << fixed(s.mean) << ',' << fixed(s.stddev) << ',' << fixed(s.std_error) << ','
            << fixed(ratio) << ',' << fixed(deviation) << ',' << s.absent_seeds << ','
            << (padded ? 1 : 0) << '\n';
  };
  for (const TrialResult& t : report.trials) {
    row(t, "ground_truth", t.truth_spread, 1.0, 0.0, t.truth.padded);
    for (const AlgorithmRun& r : t.runs) {
      row(t, algorithm_name(r.algorithm), r.spread, r.ratio, r.scatter.mean_deviation,
          r.seeds.padded);
    }
  }

  auto summary = open_output(dir / "summary.csv");
  summary << "algorithm,trials,mean_ratio,sd_ratio,mean_rank_deviation\n";
  for (const AlgorithmSummary& s : summarize(report)) {
    summary << algorithm_name(s.algorithm) << ',' << report.trials.size() << ','
            << fixed(s.mean_ratio) << ',' << fixed(s.sd_ratio) << ',' << fixed(s.mean_deviation)
            << '\n';
  }

  auto scatter = open_output(dir / "scatter.csv");
  scatter << "trial,algorithm,label,rank_at_current,rank_at_future\n";
  for (const TrialResult& t : report.trials) {
    for (const AlgorithmRun& r : t.runs) {
      for (const ScatterPoint& p : r.scatter.points) {
        scatter << t.trial << ',' << algorithm_name(r.algorithm) << ',' << p.label << ','
                << p.rank_current << ',' << p.rank_future << '\n';
      }
    }
  }

  {
    auto truth = open_output(dir / "seeds_ground_truth.jsonl");
    for (const TrialResult& t : report.trials) truth << format_seed_record(t.truth_record) << '\n';
  }
  for (Algorithm algo : report.config.algorithms) {
    auto seeds = open_output(dir / ("seeds_" + std::string(algorithm_name(algo)) + ".jsonl"));
    for (const TrialResult& t : report.trials) {
      for (const AlgorithmRun& r : t.runs) {
        if (r.algorithm == algo) seeds << format_seed_record(r.record) << '\n';
      }
    }
  }

  auto timings = open_output(dir / "timings.csv");
  timings << "trial,algorithm,seconds\n";
  for (const TrialResult& t : report.trials) {
    timings << t.trial << ",ground_truth," << fixed(t.truth_seconds, 4) << '\n';
    for (const AlgorithmRun& r : t.runs) {
      timings << t.trial << ',' << algorithm_name(r.algorithm) << ',' << fixed(r.seconds, 4) << '\n';
    }
  }
}

void print_report(const ExperimentReport& report, std::ostream& out) {
  const auto summaries = summarize(report);
  out << std::left << std::setw(14) << "algorithm" << std::right << std::setw(8) << "trials"
      << std::setw(12) << "ratio" << std::setw(10) << "sd" << std::setw(12) << "rank_dev"
      << std::setw(12) << "seconds" << '\n';
  for (const AlgorithmSummary& s : summaries) {
    out << std::left << std::setw(14) << algorithm_name(s.algorithm) << std::right << std::setw(8)
        << report.trials.size() << std::setw(12) << fixed(s.mean_ratio, 4) << std::setw(10)
        << fixed(s.sd_ratio, 4) << std::setw(12) << fixed(s.mean_deviation, 3) << std::setw(12)
        << fixed(s.mean_seconds, 3) << '\n';
  }
}

}  // namespace evoim
