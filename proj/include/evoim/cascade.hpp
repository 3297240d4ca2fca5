#pragma once

// Independent Cascade model evaluated through live-edge samples: an edge
// survives with probability p, and the spread of a seed set on a sample is the
// number of nodes forward-reachable from it over surviving edges.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "evoim/graph.hpp"
#include "evoim/simd/kernels.hpp"

namespace evoim {

// Placeholder for a seed that has no counterpart in the evaluation graph.
// Absent seeds contribute zero spread.
inline constexpr NodeId kAbsentNode = std::numeric_limits<NodeId>::max();

using SeedSet = std::vector<NodeId>;

struct CascadeConfig {
  double p = 0.01;
  std::uint64_t rounds = 10000;

  void validate() const;
};

// Survival bits over a graph's edge indices.
class LiveEdgeSample {
 public:
  LiveEdgeSample() = default;
  LiveEdgeSample(std::vector<std::uint64_t> words, std::size_t edge_count);

  bool live(EdgeIndex e) const noexcept { return (words_[e >> 6] >> (e & 63)) & 1U; }
  std::size_t size() const noexcept { return edge_count_; }
  std::uint64_t live_count() const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t edge_count_ = 0;
};

// Edge e survives iff Threshold(p) admits coin(CoinKey::from_seed(seed), e).
LiveEdgeSample sample_live_edges(const Graph& g, double p, std::uint64_t seed);
void sample_live_edges_into(const Graph& g, double p, std::uint64_t seed, LiveEdgeSample& out);

// Reusable traversal scratch space (epoch-stamped visit marks and a queue).
class TraversalScratch {
 public:
  void prepare(std::size_t n);
  // Starts a new traversal; all nodes become unvisited.
  void next_epoch();
  bool visit(NodeId v) noexcept {
    if (mark_[v] == epoch_) return false;
    mark_[v] = epoch_;
    return true;
  }
  bool visited(NodeId v) const noexcept { return mark_[v] == epoch_; }
  std::vector<NodeId>& queue() noexcept { return queue_; }

 private:
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;
};

// Nodes reachable from `seeds` over live edges, seeds included. Absent seeds
// are skipped; other out-of-range seeds are a contract violation.
std::uint32_t spread_on_sample(const Graph& g, const LiveEdgeSample& sample,
                               std::span<const NodeId> seeds);
std::uint32_t spread_on_sample(const Graph& g, const LiveEdgeSample& sample,
                               std::span<const NodeId> seeds, TraversalScratch& scratch);

// Same as spread_on_sample(g, sample_live_edges(g, p, seed), seeds) but only
// flips the coins of edges the traversal reaches.
std::uint32_t spread_on_coins(const Graph& g, simd::CoinKey key, simd::Threshold threshold,
                              std::span<const NodeId> seeds, TraversalScratch& scratch);

struct SpreadEstimate {
  double mean = 0.0;
  double stddev = 0.0;        // sample standard deviation over rounds
  double std_error = 0.0;     // stddev / sqrt(rounds)
  std::uint64_t rounds = 0;
  std::size_t absent_seeds = 0;
};

// Mean spread over cfg.rounds independent samples; round r uses the coin
// stream derive_seed(seed, r). Result is independent of thread count.
SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds,
                               const CascadeConfig& cfg, std::uint64_t seed);

inline constexpr std::size_t kMaxExactEdges = 20;

// Expected spread by enumerating all 2^|E| live-edge outcomes. Throws
// SizeError when |E| > kMaxExactEdges.
double exact_spread(const Graph& g, std::span<const NodeId> seeds, double p);

}  // namespace evoim
