#pragma once

// Reverse reachable sets: for a target v and a random live-edge realization,
// the nodes that can reach v. The fraction of random RR sets a seed set hits,
// times the node count, is an unbiased estimate of its expected spread.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evoim/cascade.hpp"
#include "evoim/evolution.hpp"
#include "evoim/graph.hpp"
#include "evoim/selection_types.hpp"

namespace evoim {

struct RRSet {
  NodeId target = 0;
  std::vector<NodeId> members;  // target first, then in discovery order
  std::uint32_t source_instance = 0;
};

// Flat storage for many RR sets.
class RRCollection {
 public:
  void add(NodeId target, std::span<const NodeId> members, std::uint32_t source_instance);
  void append(const RRCollection& other);

  std::size_t size() const noexcept { return targets_.size(); }
  std::span<const NodeId> members(std::size_t i) const noexcept {
    return {members_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  NodeId target(std::size_t i) const noexcept { return targets_[i]; }
  std::uint32_t source_instance(std::size_t i) const noexcept { return instances_[i]; }
  RRSet at(std::size_t i) const;
  std::size_t total_members() const noexcept { return members_.size(); }

 private:
  std::vector<NodeId> members_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::uint32_t> instances_;
};

// Reverse BFS from v; each in-edge of a dequeued node admits its source with
// probability p (coin stream CoinKey::from_seed(seed), indexed by in-CSR
// position). Visited nodes are never re-enqueued.
RRSet generate_rr_set(const Graph& g, NodeId v, double p, std::uint64_t seed);

// Workspace-reusing variants; the result is left in scratch.queue().
void reverse_reach(const Graph& g, NodeId v, simd::CoinKey key, simd::Threshold threshold,
                   TraversalScratch& scratch);
void reverse_reach(const GrowthOverlay& g, NodeId v, simd::CoinKey key,
                   simd::Threshold threshold, TraversalScratch& scratch);

struct ThetaConfig {
  std::optional<std::uint64_t> theta_override;
  double epsilon = 0.1;
  double ell = 1.0;

  void validate() const;
};

// theta_override if set, else
// ceil((8 + 2 eps) n (ell ln n + ln C(n, k) + ln 2) / (eps^2 k)).
std::uint64_t compute_theta(double n_hat, std::uint32_t k, const ThetaConfig& cfg);

// Greedy maximum coverage over the collection. Candidates are ids below
// candidate_limit. Ties go to the smaller id. If fewer than k candidates have
// positive coverage, the remainder is filled with the smallest unselected
// candidate ids and the result is flagged as padded. Entry scores are the
// number of sets newly covered.
RankedSeedSet max_coverage_select(const RRCollection& sets, std::uint32_t k,
                                  NodeId candidate_limit);
RankedSeedSet max_coverage_select(std::span<const RRSet> sets, std::uint32_t k,
                                  NodeId candidate_limit);

}  // namespace evoim
