#pragma once

// Forest Fire growth of a directed graph, used to predict how the current
// snapshot will look after a number of node arrivals.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evoim/cascade.hpp"
#include "evoim/graph.hpp"
#include "evoim/rng.hpp"

namespace evoim {

enum class BurnDistribution {
  kGeometric,  // successes before first failure, success probability = burning probability
  kBinomial,   // binomial(binomial_cap, mean / binomial_cap)
};

struct FfmParams {
  double alpha = 0.35;  // forward burning probability
  double gamma = 0.32;  // backward burning ratio; gamma * alpha is the backward probability
  std::uint64_t arrivals = 0;
  BurnDistribution distribution = BurnDistribution::kGeometric;
  std::uint32_t binomial_cap = 10;
  // Also continue burning from nodes reached over out-links.
  bool recurse_backward = false;
  // Stored edges point against the link direction: a link v -> w is kept as
  // w -> v, so influence flows from the linked-to node to the linker (as in a
  // citation graph propagated from cited to citing). Burning still follows
  // links.
  bool reverse_orientation = false;

  double forward_mean() const noexcept { return alpha / (1.0 - alpha); }
  double backward_mean() const noexcept { return gamma * alpha / (1.0 - gamma * alpha); }
  void validate() const;

  static FfmParams synthetic_preset() { return {0.35, 0.32}; }
  static FfmParams hep_preset() { return {0.19, 0.75}; }
  static FfmParams patents_preset() { return {0.15, 0.76}; }
};

struct EvolvedGraph {
  Graph graph;
  NodeId original_n = 0;  // ids below this are the nodes of the input snapshot
};

// A base graph plus the nodes and edges added by Forest Fire arrivals. Keeps
// the base shared, so many predicted instances can be drawn from one snapshot
// without copying it. Edges added on top of the base get coin indices
// base.num_edges() + serial.
class GrowthOverlay {
 public:
  explicit GrowthOverlay(const Graph& base);

  // Drops all arrivals.
  void reset();
  // Appends params.arrivals nodes, one at a time.
  void grow(const FfmParams& params, SplitMix64& rng);

  const Graph& base() const noexcept { return *base_; }
  NodeId num_nodes() const noexcept { return n_; }
  NodeId original_nodes() const noexcept { return base_->num_nodes(); }
  std::size_t num_edges() const noexcept { return base_->num_edges() + added_.size(); }
  std::span<const Edge> added_edges() const noexcept { return added_; }
  std::size_t added_out_degree(NodeId v) const noexcept {
    return v < extra_out_.size() ? extra_out_[v].size() : 0;
  }
  std::size_t added_in_degree(NodeId v) const noexcept {
    return v < extra_in_.size() ? extra_in_[v].size() : 0;
  }

  // f(source, coin_index) for every in-edge of v.
  template <typename F>
  void for_each_in_edge(NodeId v, F&& f) const {
    if (v < base_->num_nodes()) {
      const EdgeIndex first = base_->in_begin(v);
      const auto sources = base_->in_neighbors(v);
      for (std::size_t i = 0; i < sources.size(); ++i) {
        f(sources[i], static_cast<std::uint32_t>(first + i));
      }
    }
    if (v < extra_in_.size()) {
      for (const auto& [src, coin_index] : extra_in_[v]) f(src, coin_index);
    }
  }

  Graph materialize() const;

 private:
  void add_edge(NodeId src, NodeId dst);
  template <typename Visit>
  void for_each_in_neighbor(NodeId u, Visit&& visit) const;
  template <typename Visit>
  void for_each_out_neighbor(NodeId u, Visit&& visit) const;
  std::uint64_t draw_count(double burn_probability, double mean, const FfmParams& params,
                           SplitMix64& rng) const;
  void burn_from(NodeId arrival, const FfmParams& params, SplitMix64& rng);

  const Graph* base_;
  NodeId n_;
  std::vector<Edge> added_;
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> extra_in_;
  std::vector<std::vector<NodeId>> extra_out_;
  std::vector<NodeId> touched_;
  TraversalScratch visited_;
  std::vector<NodeId> candidates_;
  std::vector<NodeId> burn_queue_;
};

// Grows g0 by params.arrivals Forest Fire arrivals drawn from `seed`.
EvolvedGraph evolve(const Graph& g0, const FfmParams& params, std::uint64_t seed);

struct FitGrid {
  std::vector<double> alphas;
  std::vector<double> gammas;
  std::uint32_t seeds_per_point = 5;

  // alpha in {step, 2 step, ..., alpha_max}, gamma in {step, ..., gamma_max}.
  static FitGrid uniform(double step = 0.05, double alpha_max = 0.6, double gamma_max = 1.0);
};

struct FitResult {
  FfmParams params;
  double objective = 0.0;
};

// Picks the grid point whose simulated growth best matches consecutive
// snapshot pairs. Compares edge-count growth and the mean link out-degree of the
// arriving nodes (median over seeds_per_point simulations) by squared relative
// error. `arrivals` of the result is the node growth of the last pair; other
// fields are copied from `base`. Throws DataError for fewer than two
// snapshots or a pair that does not grow.
FitResult fit_parameters(std::span<const Graph> snapshots, const FitGrid& grid,
                         std::uint64_t seed, const FfmParams& base = {});

// Flat "key = value" artifact.
std::string format_ffm_params(const FfmParams& params);
FfmParams parse_ffm_params(const std::string& text);

}  // namespace evoim
