#include "evoim/cascade.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "evoim/error.hpp"
#include "evoim/rng.hpp"

namespace evoim {

void CascadeConfig::validate() const {
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  require(rounds >= 1, "rounds must be >= 1");
}

LiveEdgeSample::LiveEdgeSample(std::vector<std::uint64_t> words, std::size_t edge_count)
    : words_(std::move(words)), edge_count_(edge_count) {
  require(words_.size() == simd::words_for_bits(edge_count), "mask length mismatch");
}

std::uint64_t LiveEdgeSample::live_count() const noexcept { return simd::popcount(words_); }

void sample_live_edges_into(const Graph& g, double p, std::uint64_t seed, LiveEdgeSample& out) {
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  const std::size_t m = g.num_edges();
  std::vector<std::uint64_t> words(simd::words_for_bits(m));
  if (m > 0) {
    simd::active_kernels().bernoulli_mask(simd::CoinKey::from_seed(seed), 0, m,
                                          simd::Threshold::from_probability(p), words.data());
  }
  out = LiveEdgeSample(std::move(words), m);
}

LiveEdgeSample sample_live_edges(const Graph& g, double p, std::uint64_t seed) {
  LiveEdgeSample out;
  sample_live_edges_into(g, p, seed, out);
  return out;
}

void TraversalScratch::prepare(std::size_t n) {
  if (mark_.size() < n) mark_.resize(n, 0);
}

void TraversalScratch::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
  queue_.clear();
}

namespace {

template <typename IsLive>
std::uint32_t forward_reach(const Graph& g, std::span<const NodeId> seeds,
                            TraversalScratch& scratch, IsLive is_live) {
  scratch.prepare(g.num_nodes());
  scratch.next_epoch();
  auto& queue = scratch.queue();
  for (NodeId s : seeds) {
    if (s == kAbsentNode) continue;
    require(s < g.num_nodes(), "seed outside the graph");
    if (scratch.visit(s)) queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const EdgeIndex first = g.out_begin(u);
    const auto targets = g.out_neighbors(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const NodeId w = targets[i];
      if (!scratch.visited(w) && is_live(static_cast<EdgeIndex>(first + i))) {
        scratch.visit(w);
        queue.push_back(w);
      }
    }
  }
  return static_cast<std::uint32_t>(queue.size());
}

}  // namespace

std::uint32_t spread_on_sample(const Graph& g, const LiveEdgeSample& sample,
                               std::span<const NodeId> seeds, TraversalScratch& scratch) {
  require(sample.size() == g.num_edges(), "sample does not match graph");
  return forward_reach(g, seeds, scratch, [&](EdgeIndex e) { return sample.live(e); });
}

std::uint32_t spread_on_sample(const Graph& g, const LiveEdgeSample& sample,
                               std::span<const NodeId> seeds) {
  TraversalScratch scratch;
  return spread_on_sample(g, sample, seeds, scratch);
}

std::uint32_t spread_on_coins(const Graph& g, simd::CoinKey key, simd::Threshold threshold,
                              std::span<const NodeId> seeds, TraversalScratch& scratch) {
  return forward_reach(g, seeds, scratch,
                       [&](EdgeIndex e) { return threshold.admits(simd::coin(key, e)); });
}

SpreadEstimate estimate_spread(const Graph& g, std::span<const NodeId> seeds,
                               const CascadeConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SpreadEstimate est;
  est.rounds = cfg.rounds;
  for (NodeId s : seeds) est.absent_seeds += s == kAbsentNode ? 1 : 0;

  const auto threshold = simd::Threshold::from_probability(cfg.p);
  const auto rounds = static_cast<std::int64_t>(cfg.rounds);
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
#pragma omp parallel reduction(+ : sum, sum_sq)
  {
    TraversalScratch scratch;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rounds; ++r) {
      const auto key = simd::CoinKey::from_seed(derive_seed(seed, static_cast<std::uint64_t>(r)));
      const std::uint64_t s = spread_on_coins(g, key, threshold, seeds, scratch);
      sum += s;
      sum_sq += s * s;
    }
  }
  const double n = static_cast<double>(cfg.rounds);
  est.mean = static_cast<double>(sum) / n;
  if (cfg.rounds > 1) {
    const double centered =
        static_cast<double>(sum_sq) - static_cast<double>(sum) * static_cast<double>(sum) / n;
    est.stddev = std::sqrt(std::max(0.0, centered / (n - 1.0)));
  }
  est.std_error = est.stddev / std::sqrt(n);
  return est;
}

double exact_spread(const Graph& g, std::span<const NodeId> seeds, double p) {
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  const std::size_t m = g.num_edges();
  if (m > kMaxExactEdges) {
    throw SizeError("exact_spread enumerates 2^|E| outcomes; |E| = " + std::to_string(m) +
                    " exceeds " + std::to_string(kMaxExactEdges));
  }
  TraversalScratch scratch;
  double expected = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    const int live = std::popcount(mask);
    const double prob =
        std::pow(p, live) * std::pow(1.0 - p, static_cast<int>(m) - live);
    if (prob == 0.0) continue;
    const auto spread = forward_reach(g, seeds, scratch,
                                      [&](EdgeIndex e) { return ((mask >> e) & 1U) != 0; });
    expected += prob * spread;
  }
  return expected;
}

}  // namespace evoim
