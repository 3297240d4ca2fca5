#pragma once

// Experiment harness: builds current/future snapshot pairs, runs the
// selectors on the current snapshot, and scores their seeds on the future one
// against a static greedy run directly on the future snapshot.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoim/cascade.hpp"
#include "evoim/config.hpp"
#include "evoim/evolution.hpp"
#include "evoim/graph.hpp"
#include "evoim/selection.hpp"

namespace evoim {

// ---------------------------------------------------------------------------
// Synthetic data

// Forest Fire growth from a single node up to `nodes` nodes.
Graph grow_from_single_node(NodeId nodes, const FfmParams& ffm, std::uint64_t seed);

struct SyntheticSpec {
  NodeId seed_nodes = 1000;
  FfmParams ffm = FfmParams::synthetic_preset();
  std::vector<std::uint64_t> snapshot_arrivals{0};
};

// One growth trajectory; snapshot i has seed_nodes + snapshot_arrivals[i]
// nodes. Arrival counts must be non-decreasing, so snapshots are nested.
std::vector<Graph> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Counterexample to carrying the static approximation guarantee over to an
// evolving network: G_0 has n nodes and the single edge 0 -> 1; the future
// network is `copies` disjoint replicas of G_0; propagation is deterministic.

struct Theorem1Result {
  std::uint64_t sigma_classical = 0;  // spread in the future network of greedy seeds picked on G_0
  std::uint64_t sigma_optimal = 0;    // best achievable spread with k seeds in the future network
  bool bound_holds = false;           // sigma_classical < (1 - 1/e) * sigma_optimal
  double bound = 0.0;                 // (1 - 1/e) * sigma_optimal
};

// Requires k >= 1, n >= max(2, k + 1) and copies > k.
Theorem1Result theorem1_scenario(NodeId n, std::uint32_t k, std::uint32_t copies);

// ---------------------------------------------------------------------------
// Rank scatter

struct ScatterPoint {
  std::string label;
  std::uint32_t rank_current = 0;  // rank in the selector's list, top_m + 1 when missing
  std::uint32_t rank_future = 0;   // rank in the ground-truth list
};

struct RankScatter {
  std::vector<ScatterPoint> points;
  double mean_deviation = 0.0;  // mean |rank_current - rank_future|
};

// Pairs for the top_m ground-truth seeds (ids in the future graph) that exist
// in the current graph. future_to_current maps future ids to current ids or
// kAbsentNode. `selected` holds current-graph ids.
RankScatter rank_scatter(const RankedSeedSet& selected, const RankedSeedSet& truth,
                         std::span<const NodeId> future_to_current, const Graph& future,
                         std::uint32_t top_m);

// ---------------------------------------------------------------------------
// Seed records

struct SeedRecord {
  std::string algorithm;
  std::string config_json;  // compact JSON object echoing the selection config
  std::uint64_t seed = 0;
  bool padded = false;
  struct Entry {
    std::string label;
    std::uint32_t rank = 0;
    double score = 0.0;
  };
  std::vector<Entry> seeds;
};

SeedRecord make_seed_record(std::string algorithm, std::string config_json, std::uint64_t seed,
                            const Graph& g, const RankedSeedSet& set);
// One JSON object on one line (no trailing newline).
std::string format_seed_record(const SeedRecord& record);
SeedRecord parse_seed_record(const std::string& line);
std::string selection_config_json(Algorithm algo, const SelectionConfig& cfg);

// Maps seed labels onto g; labels missing from g become kAbsentNode.
SeedSet resolve_seeds(const SeedRecord& record, const Graph& g);

// ---------------------------------------------------------------------------
// Comparison experiment

struct ExperimentConfig {
  // Real data: a current and a future snapshot, either as two edge lists or
  // as cuts of one timestamped stream. Otherwise a synthetic pair is grown.
  std::string graph_path;
  std::string future_graph_path;
  std::string temporal_path;
  std::optional<Timestamp> cut_current;
  std::optional<Timestamp> cut_future;
  // Propagate against the link direction: edge files are read flipped and
  // Forest Fire growth (synthetic pairs and the selectors' predictions) uses
  // FfmParams::reverse_orientation.
  bool reverse_edges = false;

  NodeId synthetic_nodes = 1500;
  double growth = 0.25;  // synthetic arrivals = round(growth * synthetic_nodes)
  // Arrivals the selectors predict; defaults to the observed node growth.
  std::optional<std::uint64_t> arrivals;

  std::vector<Algorithm> algorithms;
  SelectionConfig selection;
  std::uint32_t truth_rounds = 5000;
  std::uint64_t eval_rounds = 10000;
  std::uint64_t seed = 1;
  std::uint32_t trials = 1;
  std::uint32_t scatter_top = 10;

  bool synthetic() const { return graph_path.empty() && temporal_path.empty(); }
  void validate() const;
  // Canonical key-value rendering of every setting.
  std::string echo() const;

  // Full-scale defaults: p = 0.01, I = 500, R = 5000, 10,000 evaluation rounds.
  static ExperimentConfig defaults();
  // Keys are documented in the README. Unknown keys are rejected.
  static ExperimentConfig from_key_values(const KeyValues& kv);
};

struct AlgorithmRun {
  Algorithm algorithm;
  RankedSeedSet seeds;  // current-graph ids
  SeedRecord record;
  SpreadEstimate spread;  // on the future graph
  double ratio = 0.0;     // spread / ground-truth spread
  double seconds = 0.0;
  RankScatter scatter;
};

struct TrialResult {
  std::uint32_t trial = 0;
  NodeId current_nodes = 0;
  std::size_t current_edges = 0;
  NodeId future_nodes = 0;
  std::size_t future_edges = 0;
  std::uint64_t predicted_arrivals = 0;
  RankedSeedSet truth;
  SeedRecord truth_record;
  SpreadEstimate truth_spread;
  double truth_seconds = 0.0;
  std::vector<AlgorithmRun> runs;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
};

// Throws ConfigError when a future snapshot is missing for real data.
ExperimentReport run_comparison(const ExperimentConfig& cfg);

struct AlgorithmSummary {
  Algorithm algorithm;
  double mean_ratio = 0.0;
  double sd_ratio = 0.0;
  double mean_deviation = 0.0;
  double mean_seconds = 0.0;
};

std::vector<AlgorithmSummary> summarize(const ExperimentReport& report);
std::vector<double> ratios_of(const ExperimentReport& report, Algorithm algo);

struct PairedComparison {
  std::size_t n = 0;
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;  // one-sided, H1: mean(a - b) > 0
};

PairedComparison paired_compare(std::span<const double> a, std::span<const double> b);

// Writes config.txt, metrics.csv, summary.csv, scatter.csv and
// seeds_<algo>.jsonl (all deterministic for a fixed config), plus timings.csv.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);
// Aligned human-readable table.
void print_report(const ExperimentReport& report, std::ostream& out);

}  // namespace evoim
