#include "evoim/rrset.hpp"

#include <bit>
#include <cmath>

#include "evoim/error.hpp"

namespace evoim {

void RRCollection::add(NodeId target, std::span<const NodeId> members,
                       std::uint32_t source_instance) {
  members_.insert(members_.end(), members.begin(), members.end());
  offsets_.push_back(members_.size());
  targets_.push_back(target);
  instances_.push_back(source_instance);
}

void RRCollection::append(const RRCollection& other) {
  for (std::size_t i = 0; i < other.size(); ++i) {
    add(other.target(i), other.members(i), other.source_instance(i));
  }
}

RRSet RRCollection::at(std::size_t i) const {
  const auto m = members(i);
  return {targets_[i], {m.begin(), m.end()}, instances_[i]};
}

namespace {

// In-degree from which the vectorized coin kernel is used for a node's in-edges.
constexpr std::size_t kVectorCoinDegree = 32;

}  // namespace

void reverse_reach(const Graph& g, NodeId v, simd::CoinKey key, simd::Threshold threshold,
                   TraversalScratch& scratch) {
  require(v < g.num_nodes(), "target outside the graph");
  thread_local std::vector<std::uint64_t> mask;
  scratch.prepare(g.num_nodes());
  scratch.next_epoch();
  auto& queue = scratch.queue();
  scratch.visit(v);
  queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const auto sources = g.in_neighbors(u);
    const EdgeIndex first = g.in_begin(u);
    if (sources.size() >= kVectorCoinDegree) {
      mask.resize(simd::words_for_bits(sources.size()));
      simd::active_kernels().bernoulli_mask(key, first, sources.size(), threshold, mask.data());
      for (std::size_t w = 0; w < mask.size(); ++w) {
        for (std::uint64_t bits = mask[w]; bits != 0; bits &= bits - 1) {
          const NodeId s = sources[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
          if (scratch.visit(s)) queue.push_back(s);
        }
      }
    } else {
      for (std::size_t i = 0; i < sources.size(); ++i) {
        if (threshold.admits(simd::coin(key, static_cast<std::uint32_t>(first + i))) &&
            scratch.visit(sources[i])) {
          queue.push_back(sources[i]);
        }
      }
    }
  }
}

void reverse_reach(const GrowthOverlay& g, NodeId v, simd::CoinKey key,
                   simd::Threshold threshold, TraversalScratch& scratch) {
  require(v < g.num_nodes(), "target outside the graph");
  scratch.prepare(g.num_nodes());
  scratch.next_epoch();
  auto& queue = scratch.queue();
  scratch.visit(v);
  queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    g.for_each_in_edge(queue[head], [&](NodeId s, std::uint32_t coin_index) {
      if (threshold.admits(simd::coin(key, coin_index)) && scratch.visit(s)) queue.push_back(s);
    });
  }
}

RRSet generate_rr_set(const Graph& g, NodeId v, double p, std::uint64_t seed) {
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  TraversalScratch scratch;
  reverse_reach(g, v, simd::CoinKey::from_seed(seed), simd::Threshold::from_probability(p),
                scratch);
  return {v, scratch.queue(), 0};
}

void ThetaConfig::validate() const {
  require(epsilon > 0.0, "epsilon must be > 0");
  require(ell >= 1.0, "ell must be >= 1");
  require(!theta_override || *theta_override >= 1, "theta must be >= 1");
}

std::uint64_t compute_theta(double n_hat, std::uint32_t k, const ThetaConfig& cfg) {
  cfg.validate();
  if (cfg.theta_override) return *cfg.theta_override;
  require(k >= 1 && n_hat >= k, "compute_theta needs n_hat >= k >= 1");
  const double log_binom =
      std::lgamma(n_hat + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_hat - k + 1.0);
  const double numerator =
      (8.0 + 2.0 * cfg.epsilon) * n_hat * (cfg.ell * std::log(n_hat) + log_binom + std::log(2.0));
  return static_cast<std::uint64_t>(std::ceil(numerator / (cfg.epsilon * cfg.epsilon * k)));
}

RankedSeedSet max_coverage_select(const RRCollection& sets, std::uint32_t k,
                                  NodeId candidate_limit) {
  require(k >= 1, "k must be >= 1");
  require(candidate_limit >= k, "fewer candidates than k");

  std::vector<std::uint32_t> coverage(candidate_limit, 0);
  std::vector<std::size_t> index_offsets(std::size_t{candidate_limit} + 1, 0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (NodeId m : sets.members(s)) {
      if (m < candidate_limit) ++coverage[m];
    }
  }
  for (NodeId v = 0; v < candidate_limit; ++v) index_offsets[v + 1] = index_offsets[v] + coverage[v];
  std::vector<std::uint32_t> sets_of(index_offsets.back());
  {
    std::vector<std::size_t> fill(index_offsets.begin(), index_offsets.end() - 1);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (NodeId m : sets.members(s)) {
        if (m < candidate_limit) sets_of[fill[m]++] = static_cast<std::uint32_t>(s);
      }
    }
  }

  std::vector<bool> covered(sets.size(), false);
  std::vector<bool> selected(candidate_limit, false);
  RankedSeedSet result;
  NodeId next_pad = 0;
  for (std::uint32_t round = 1; round <= k; ++round) {
    const auto best = static_cast<NodeId>(simd::argmax(coverage));
    if (coverage[best] == 0) {
      result.padded = true;
      while (selected[next_pad]) ++next_pad;
      selected[next_pad] = true;
      result.entries.push_back({next_pad, round, 0.0});
      continue;
    }
    result.entries.push_back({best, round, static_cast<double>(coverage[best])});
    selected[best] = true;
    for (std::size_t i = index_offsets[best]; i < index_offsets[best + 1]; ++i) {
      const std::uint32_t s = sets_of[i];
      if (covered[s]) continue;
      covered[s] = true;
      for (NodeId m : sets.members(s)) {
        if (m < candidate_limit) --coverage[m];
      }
    }
  }
  return result;
}

RankedSeedSet max_coverage_select(std::span<const RRSet> sets, std::uint32_t k,
                                  NodeId candidate_limit) {
  RRCollection collection;
  for (const RRSet& s : sets) collection.add(s.target, s.members, s.source_instance);
  return max_coverage_select(collection, k, candidate_limit);
}

}  // namespace evoim
