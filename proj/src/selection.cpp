#include "evoim/selection.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "evoim/error.hpp"
#include "evoim/rng.hpp"

namespace evoim {

void GenieConfig::validate() const {
  require(k >= 1, "k must be >= 1");
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  require(instances >= 1, "I must be >= 1");
  require(rounds >= 1, "R must be >= 1");
  ffm.validate();
}

void SeerConfig::validate() const {
  require(k >= 1, "k must be >= 1");
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  require(rr_sets_per_instance >= 1, "rr_sets_per_instance must be >= 1");
  theta.validate();
  ffm.validate();
}

namespace {

struct GainScratch {
  TraversalScratch covered;
  TraversalScratch walk;
};

// Adds each candidate's marginal gain on `sample` to gains[v]. Nodes already
// reached by the seeds are never re-entered: anything reachable from them is
// covered too.
void accumulate_gains(const Graph& g, const LiveEdgeSample& sample,
                      std::span<const NodeId> seeds, std::span<const bool> excluded,
                      std::span<std::uint64_t> gains, GainScratch& scratch) {
  spread_on_sample(g, sample, seeds, scratch.covered);
  scratch.walk.prepare(g.num_nodes());
  const auto limit = static_cast<NodeId>(gains.size());
  for (NodeId v = 0; v < limit; ++v) {
    if (excluded[v] || scratch.covered.visited(v)) continue;
    scratch.walk.next_epoch();
    auto& queue = scratch.walk.queue();
    scratch.walk.visit(v);
    queue.push_back(v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      const EdgeIndex first = g.out_begin(u);
      const auto targets = g.out_neighbors(u);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const NodeId w = targets[i];
        if (sample.live(static_cast<EdgeIndex>(first + i)) && !scratch.covered.visited(w) &&
            scratch.walk.visit(w)) {
          queue.push_back(w);
        }
      }
    }
    gains[v] += queue.size();
  }
}

}  // namespace

std::vector<std::uint64_t> marginal_gains(const Graph& g, const LiveEdgeSample& sample,
                                          std::span<const NodeId> seeds, NodeId candidate_limit) {
  require(candidate_limit <= g.num_nodes(), "candidate limit beyond graph");
  std::vector<std::uint64_t> gains(candidate_limit, 0);
  GainScratch scratch;
  std::unique_ptr<bool[]> flags(new bool[candidate_limit]());
  accumulate_gains(g, sample, seeds, {flags.get(), candidate_limit}, gains, scratch);
  return gains;
}

RankedSeedSet greedy_on_graph(const Graph& g, NodeId candidate_limit, std::uint32_t k, double p,
                              std::uint32_t rounds, std::uint64_t seed) {
  require(k >= 1 && k <= candidate_limit, "need 1 <= k <= number of candidates");
  require(candidate_limit <= g.num_nodes(), "candidate limit beyond graph");
  require(rounds >= 1, "R must be >= 1");

  std::unique_ptr<bool[]> excluded(new bool[candidate_limit]());
  SeedSet seeds;
  RankedSeedSet result;
  std::vector<std::uint64_t> gains(candidate_limit);
  for (std::uint32_t j = 0; j < k; ++j) {
    std::fill(gains.begin(), gains.end(), 0);
#pragma omp parallel
    {
      GainScratch scratch;
      LiveEdgeSample sample;
      std::vector<std::uint64_t> local(candidate_limit, 0);
#pragma omp for schedule(dynamic, 4)
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(rounds); ++r) {
        const std::uint64_t index = std::uint64_t{j} * rounds + static_cast<std::uint64_t>(r);
        sample_live_edges_into(g, p, derive_seed(seed, index), sample);
        accumulate_gains(g, sample, seeds, {excluded.get(), candidate_limit}, local, scratch);
      }
#pragma omp critical
      for (NodeId v = 0; v < candidate_limit; ++v) gains[v] += local[v];
    }
    NodeId best = candidate_limit;
    for (NodeId v = 0; v < candidate_limit; ++v) {
      if (excluded[v]) continue;
      if (best == candidate_limit || gains[v] > gains[best]) best = v;
    }
    excluded[best] = true;
    seeds.push_back(best);
    result.entries.push_back({best, j + 1, static_cast<double>(gains[best])});
  }
  return result;
}

RankedSeedSet select_genie(const Graph& g0, const GenieConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require(cfg.k <= g0.num_nodes(), "k exceeds the number of nodes");
  const std::uint64_t evolution_stream = derive_seed(seed, Stream::kEvolution);
  const std::uint64_t cascade_stream = derive_seed(seed, Stream::kCascade);

  std::vector<RankedSeedSet> per_instance;
  per_instance.reserve(cfg.instances);
  GrowthOverlay overlay(g0);
  for (std::uint32_t i = 0; i < cfg.instances; ++i) {
    SplitMix64 rng(derive_seed(evolution_stream, i));
    overlay.reset();
    overlay.grow(cfg.ffm, rng);
    const Graph predicted = overlay.materialize();
    per_instance.push_back(greedy_on_graph(predicted, g0.num_nodes(), cfg.k, cfg.p, cfg.rounds,
                                           derive_seed(cascade_stream, i)));
  }
  return aggregate_ranks(per_instance, cfg.k, cfg.aggregation);
}

RankedSeedSet aggregate_ranks(std::span<const RankedSeedSet> sets, std::uint32_t k,
                              RankAggregation mode) {
  require(!sets.empty(), "aggregate_ranks needs at least one ranked set");
  require(k >= 1, "k must be >= 1");
  if (sets.size() == 1) {
    RankedSeedSet out = sets.front();
    if (out.entries.size() > k) out.entries.resize(k);
    return out;
  }
  std::map<NodeId, double> score;
  bool padded = false;
  for (const RankedSeedSet& s : sets) {
    require(s.entries.size() <= k, "ranked set longer than k");
    padded = padded || s.padded;
    for (const RankedEntry& e : s.entries) {
      require(e.rank >= 1 && e.rank <= k, "rank outside 1..k");
      score[e.node] += mode == RankAggregation::kBorda ? static_cast<double>(k + 1 - e.rank)
                                                       : static_cast<double>(e.rank);
    }
  }
  std::vector<std::pair<NodeId, double>> order(score.begin(), score.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  RankedSeedSet out;
  out.padded = padded;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    out.entries.push_back({order[i].first, static_cast<std::uint32_t>(i + 1), order[i].second});
  }
  return out;
}

namespace {

constexpr std::uint64_t kInstanceBlock = 512;

struct RRDraw {
  NodeId target;
  simd::CoinKey key;
};

RRDraw draw_rr(std::uint64_t rr_stream, std::uint64_t index, NodeId n) {
  SplitMix64 rng(derive_seed(rr_stream, index));
  const auto target = static_cast<NodeId>(rng.below(n));
  return {target, simd::CoinKey::from_seed(rng())};
}

}  // namespace

RankedSeedSet select_seer(const Graph& g0, const SeerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require(g0.num_nodes() >= 1 && cfg.k <= g0.num_nodes(), "k exceeds the number of nodes");
  const double n_hat = static_cast<double>(g0.num_nodes()) + static_cast<double>(cfg.ffm.arrivals);
  const std::uint64_t theta = compute_theta(n_hat, cfg.k, cfg.theta);
  const std::uint64_t evolution_stream = derive_seed(seed, Stream::kEvolution);
  const std::uint64_t rr_stream = derive_seed(seed, Stream::kReverseReach);
  const auto threshold = simd::Threshold::from_probability(cfg.p);
  const std::uint64_t per = cfg.rr_sets_per_instance;

  const std::uint64_t blocks = (theta + kInstanceBlock - 1) / kInstanceBlock;
  std::vector<RRCollection> block_sets(blocks);
#pragma omp parallel
  {
    GrowthOverlay overlay(g0);
    TraversalScratch scratch;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * kInstanceBlock;
      const std::uint64_t end = std::min(theta, begin + kInstanceBlock);
      RRCollection& out = block_sets[static_cast<std::size_t>(b)];
      for (std::uint64_t i = begin; i < end; ++i) {
        overlay.reset();
        if (cfg.ffm.arrivals > 0) {
          SplitMix64 rng(derive_seed(evolution_stream, i));
          overlay.grow(cfg.ffm, rng);
        }
        for (std::uint64_t j = 0; j < per; ++j) {
          const RRDraw draw = draw_rr(rr_stream, i * per + j, overlay.num_nodes());
          reverse_reach(overlay, draw.target, draw.key, threshold, scratch);
          out.add(draw.target, scratch.queue(), static_cast<std::uint32_t>(i));
        }
      }
    }
  }
  RRCollection all;
  for (const RRCollection& block : block_sets) all.append(block);
  const NodeId limit = cfg.restrict_to_current
                           ? g0.num_nodes()
                           : static_cast<NodeId>(g0.num_nodes() + cfg.ffm.arrivals);
  return max_coverage_select(all, cfg.k, limit);
}

RankedSeedSet select_rr_static(const Graph& g, std::uint32_t k, double p, std::uint64_t theta,
                               std::uint64_t seed) {
  require(k >= 1 && k <= g.num_nodes(), "need 1 <= k <= n");
  require(theta >= 1, "theta must be >= 1");
  const std::uint64_t rr_stream = derive_seed(seed, Stream::kReverseReach);
  const auto threshold = simd::Threshold::from_probability(p);
  RRCollection all;
  TraversalScratch scratch;
  for (std::uint64_t i = 0; i < theta; ++i) {
    const RRDraw draw = draw_rr(rr_stream, i, g.num_nodes());
    reverse_reach(g, draw.target, draw.key, threshold, scratch);
    all.add(draw.target, scratch.queue(), static_cast<std::uint32_t>(i));
  }
  return max_coverage_select(all, k, g.num_nodes());
}

RankedSeedSet select_greedy_static(const Graph& g, std::uint32_t k, double p,
                                   std::uint32_t rounds, std::uint64_t seed) {
  require(k >= 1 && k <= g.num_nodes(), "need 1 <= k <= n");
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  // Same sample stream as instance 0 of select_genie.
  return greedy_on_graph(g, g.num_nodes(), k, p, rounds,
                         derive_seed(derive_seed(seed, Stream::kCascade), 0));
}

RankedSeedSet select_degree(const Graph& g, std::uint32_t k) {
  require(k >= 1 && k <= g.num_nodes(), "need 1 <= k <= n");
  std::vector<NodeId> order(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.out_degree(a) > g.out_degree(b); });
  RankedSeedSet out;
  for (std::uint32_t j = 0; j < k; ++j) {
    out.entries.push_back({order[j], j + 1, static_cast<double>(g.out_degree(order[j]))});
  }
  return out;
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "genie") return Algorithm::kGenie;
  if (name == "seer") return Algorithm::kSeer;
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "degree") return Algorithm::kDegree;
  return std::nullopt;
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kGenie: return "genie";
    case Algorithm::kSeer: return "seer";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kDegree: return "degree";
  }
  return "unknown";
}

RankedSeedSet run_selection(Algorithm algo, const Graph& g0, const SelectionConfig& cfg,
                            std::uint64_t seed) {
  switch (algo) {
    case Algorithm::kGenie: {
      GenieConfig genie{cfg.k, cfg.p, cfg.instances, cfg.rounds, cfg.ffm, cfg.aggregation};
      return select_genie(g0, genie, seed);
    }
    case Algorithm::kSeer: {
      SeerConfig seer{cfg.k, cfg.p, cfg.theta, cfg.ffm, cfg.restrict_to_current,
                      cfg.rr_sets_per_instance};
      return select_seer(g0, seer, seed);
    }
    case Algorithm::kGreedy:
      return select_greedy_static(g0, cfg.k, cfg.p, cfg.rounds, seed);
    case Algorithm::kDegree:
      return select_degree(g0, cfg.k);
  }
  throw ContractViolation("unknown algorithm");
}

}  // namespace evoim
