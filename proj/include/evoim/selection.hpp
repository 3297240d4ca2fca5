#pragma once

// Seed selection: evolution-aware greedy (GENIE) and RR-set (SEER)
// algorithms, plus the static greedy and out-degree baselines.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evoim/cascade.hpp"
#include "evoim/evolution.hpp"
#include "evoim/graph.hpp"
#include "evoim/rrset.hpp"
#include "evoim/selection_types.hpp"

namespace evoim {

enum class RankAggregation {
  kBorda,   // k + 1 - rank per appearance
  kRawSum,  // plain sum of ranks, descending
};

struct GenieConfig {
  std::uint32_t k = 10;
  double p = 0.01;
  std::uint32_t instances = 500;  // predicted target networks (I)
  std::uint32_t rounds = 5000;    // live-edge samples per seed round (R)
  FfmParams ffm;
  RankAggregation aggregation = RankAggregation::kBorda;

  void validate() const;
};

struct SeerConfig {
  std::uint32_t k = 10;
  double p = 0.01;
  ThetaConfig theta;
  FfmParams ffm;
  // Only nodes of the current snapshot may become seeds.
  bool restrict_to_current = true;
  std::uint32_t rr_sets_per_instance = 1;

  void validate() const;
};

// Marginal gain sigma(S + v) - sigma(S) on one live-edge sample for every
// candidate v < candidate_limit.
std::vector<std::uint64_t> marginal_gains(const Graph& g, const LiveEdgeSample& sample,
                                          std::span<const NodeId> seeds, NodeId candidate_limit);

// Greedy over one fixed graph: in round j, `rounds` fresh samples drawn from
// derive_seed(seed, j * rounds + r) vote with summed marginal gains. Candidates
// are ids below candidate_limit. Scores are the summed gains of the winner.
RankedSeedSet greedy_on_graph(const Graph& g, NodeId candidate_limit, std::uint32_t k, double p,
                              std::uint32_t rounds, std::uint64_t seed);

RankedSeedSet select_genie(const Graph& g0, const GenieConfig& cfg, std::uint64_t seed);

// Combines per-instance rankings. A single input is returned unchanged
// (truncated to k). Otherwise nodes are ordered by descending score, ties to
// the smaller id. Throws ContractViolation on empty input.
RankedSeedSet aggregate_ranks(std::span<const RankedSeedSet> sets, std::uint32_t k,
                              RankAggregation mode = RankAggregation::kBorda);

RankedSeedSet select_seer(const Graph& g0, const SeerConfig& cfg, std::uint64_t seed);

// theta RR sets directly on g (no evolution), then max coverage over all nodes.
RankedSeedSet select_rr_static(const Graph& g, std::uint32_t k, double p, std::uint64_t theta,
                               std::uint64_t seed);

RankedSeedSet select_greedy_static(const Graph& g, std::uint32_t k, double p,
                                   std::uint32_t rounds, std::uint64_t seed);

// Top-k by out-degree, ties to the smaller id.
RankedSeedSet select_degree(const Graph& g, std::uint32_t k);

enum class Algorithm { kGenie, kSeer, kGreedy, kDegree };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algo);

// Everything any algorithm may need; each reads the fields it uses.
struct SelectionConfig {
  std::uint32_t k = 10;
  double p = 0.01;
  std::uint32_t instances = 500;
  std::uint32_t rounds = 5000;
  ThetaConfig theta;
  FfmParams ffm;
  bool restrict_to_current = true;
  std::uint32_t rr_sets_per_instance = 1;
  RankAggregation aggregation = RankAggregation::kBorda;
};

RankedSeedSet run_selection(Algorithm algo, const Graph& g0, const SelectionConfig& cfg,
                            std::uint64_t seed);

}  // namespace evoim
