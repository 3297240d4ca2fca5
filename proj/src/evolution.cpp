#include "evoim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "evoim/config.hpp"
#include "evoim/error.hpp"

namespace evoim {

void FfmParams::validate() const {
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(gamma * alpha < 1.0, "gamma * alpha must be < 1");
  if (distribution == BurnDistribution::kBinomial) {
    require(binomial_cap >= 1, "binomial_cap must be >= 1");
    require(forward_mean() <= binomial_cap && backward_mean() <= binomial_cap,
            "burning mean exceeds binomial_cap");
  }
  require(arrivals <= std::numeric_limits<NodeId>::max() / 2, "too many arrivals");
}

GrowthOverlay::GrowthOverlay(const Graph& base) : base_(&base), n_(base.num_nodes()) {}

void GrowthOverlay::reset() {
  for (NodeId v : touched_) {
    extra_in_[v].clear();
    extra_out_[v].clear();
  }
  touched_.clear();
  for (NodeId v = base_->num_nodes(); v < n_; ++v) {
    extra_in_[v].clear();
    extra_out_[v].clear();
  }
  added_.clear();
  n_ = base_->num_nodes();
}

void GrowthOverlay::add_edge(NodeId src, NodeId dst) {
  const auto coin_index = static_cast<std::uint32_t>(base_->num_edges() + added_.size());
  added_.push_back({src, dst});
  for (NodeId v : {src, dst}) {
    if (v < base_->num_nodes() && extra_in_[v].empty() && extra_out_[v].empty()) {
      touched_.push_back(v);
    }
  }
  extra_out_[src].push_back(dst);
  extra_in_[dst].emplace_back(src, coin_index);
}

template <typename Visit>
void GrowthOverlay::for_each_in_neighbor(NodeId u, Visit&& visit) const {
  if (u < base_->num_nodes()) {
    for (NodeId s : base_->in_neighbors(u)) visit(s);
  }
  for (const auto& entry : extra_in_[u]) visit(entry.first);
}

template <typename Visit>
void GrowthOverlay::for_each_out_neighbor(NodeId u, Visit&& visit) const {
  if (u < base_->num_nodes()) {
    for (NodeId t : base_->out_neighbors(u)) visit(t);
  }
  for (NodeId t : extra_out_[u]) visit(t);
}

std::uint64_t GrowthOverlay::draw_count(double burn_probability, double mean,
                                        const FfmParams& params, SplitMix64& rng) const {
  if (params.distribution == BurnDistribution::kGeometric) return rng.geometric(burn_probability);
  return rng.binomial(params.binomial_cap, mean / params.binomial_cap);
}

void GrowthOverlay::burn_from(NodeId arrival, const FfmParams& params, SplitMix64& rng) {
  const bool flip = params.reverse_orientation;
  auto link = [&](NodeId from, NodeId to) { flip ? add_edge(to, from) : add_edge(from, to); };
  const NodeId ambassador = static_cast<NodeId>(rng.below(arrival));
  visited_.next_epoch();
  visited_.visit(arrival);
  visited_.visit(ambassador);
  link(arrival, ambassador);

  burn_queue_.clear();
  burn_queue_.push_back(ambassador);
  const double backward_probability = params.gamma * params.alpha;

  // Uniformly picks up to `want` of the collected candidates, marking them visited.
  auto take = [&](std::uint64_t want) {
    const std::size_t count = std::min<std::size_t>(want, candidates_.size());
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(candidates_.size() - i);
      std::swap(candidates_[i], candidates_[j]);
      visited_.visit(candidates_[i]);
    }
    candidates_.resize(count);
  };

  for (std::size_t head = 0; head < burn_queue_.size(); ++head) {
    const NodeId u = burn_queue_[head];
    const std::uint64_t x = draw_count(params.alpha, params.forward_mean(), params, rng);
    const std::uint64_t y = draw_count(backward_probability, params.backward_mean(), params, rng);

    auto collect = [&](NodeId v) {
      if (!visited_.visited(v)) candidates_.push_back(v);
    };

    // x in-links of u, in link direction.
    candidates_.clear();
    if (x > 0) flip ? for_each_out_neighbor(u, collect) : for_each_in_neighbor(u, collect);
    take(x);
    for (NodeId t : candidates_) {
      link(arrival, t);
      burn_queue_.push_back(t);
    }

    // y out-links of u.
    candidates_.clear();
    if (y > 0) flip ? for_each_in_neighbor(u, collect) : for_each_out_neighbor(u, collect);
    take(y);
    for (NodeId s : candidates_) {
      link(s, arrival);
      if (params.recurse_backward) burn_queue_.push_back(s);
    }
  }
}

void GrowthOverlay::grow(const FfmParams& params, SplitMix64& rng) {
  params.validate();
  require(n_ >= 1, "cannot grow an empty graph");
  const std::size_t target = std::size_t{n_} + params.arrivals;
  if (extra_in_.size() < target) {
    extra_in_.resize(target);
    extra_out_.resize(target);
  }
  visited_.prepare(target);
  while (n_ < target) {
    const NodeId arrival = n_++;
    burn_from(arrival, params, rng);
  }
}

Graph GrowthOverlay::materialize() const {
  std::vector<Edge> edges = base_->edges();
  edges.insert(edges.end(), added_.begin(), added_.end());
  return Graph::from_edges(n_, std::move(edges), base_->labels());
}

EvolvedGraph evolve(const Graph& g0, const FfmParams& params, std::uint64_t seed) {
  require(g0.num_nodes() >= 1, "evolve needs a non-empty graph");
  params.validate();
  if (params.arrivals == 0) return {g0, g0.num_nodes()};
  GrowthOverlay overlay(g0);
  SplitMix64 rng(seed);
  overlay.grow(params, rng);
  return {overlay.materialize(), g0.num_nodes()};
}

FitGrid FitGrid::uniform(double step, double alpha_max, double gamma_max) {
  require(step > 0.0, "grid step must be positive");
  FitGrid grid;
  for (int i = 1; i * step <= alpha_max + 1e-9; ++i) grid.alphas.push_back(i * step);
  for (int i = 1; i * step <= gamma_max + 1e-9; ++i) grid.gammas.push_back(i * step);
  return grid;
}

namespace {

struct GrowthStats {
  double edge_growth;
  double arrival_out_degree;
};

GrowthStats observed_stats(const Graph& before, const Graph& after, bool reversed) {
  std::size_t arrivals = 0;
  std::size_t out_edges = 0;
  const bool by_label = !before.labels().empty() && !after.labels().empty();
  for (NodeId v = 0; v < after.num_nodes(); ++v) {
    const bool is_new = by_label ? !before.labels().find(after.label(v)).has_value()
                                 : v >= before.num_nodes();
    if (!is_new) continue;
    ++arrivals;
    out_edges += reversed ? after.in_degree(v) : after.out_degree(v);
  }
  return {static_cast<double>(after.num_edges()) - static_cast<double>(before.num_edges()),
          arrivals == 0 ? 0.0 : static_cast<double>(out_edges) / static_cast<double>(arrivals)};
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double relative_sq(double simulated, double observed) {
  const double scale = std::max(std::abs(observed), 1.0);
  const double d = (simulated - observed) / scale;
  return d * d;
}

}  // namespace

FitResult fit_parameters(std::span<const Graph> snapshots, const FitGrid& grid,
                         std::uint64_t seed, const FfmParams& base) {
  if (snapshots.size() < 2) throw DataError("fitting needs at least two snapshots");
  require(!grid.alphas.empty() && !grid.gammas.empty(), "empty parameter grid");
  require(grid.seeds_per_point >= 1, "seeds_per_point must be >= 1");
  std::vector<GrowthStats> observed;
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
    if (snapshots[i + 1].num_nodes() <= snapshots[i].num_nodes() ||
        snapshots[i].num_nodes() == 0) {
      throw DataError("snapshots " + std::to_string(i) + " and " + std::to_string(i + 1) +
                      " do not grow; cannot fit");
    }
    observed.push_back(observed_stats(snapshots[i], snapshots[i + 1], base.reverse_orientation));
  }

  FitResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<GrowthOverlay> overlays;
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) overlays.emplace_back(snapshots[i]);

  std::uint64_t point = 0;
  for (double alpha : grid.alphas) {
    for (double gamma : grid.gammas) {
      const std::uint64_t point_seed = derive_seed(seed, point++);
      FfmParams candidate = base;
      candidate.alpha = alpha;
      candidate.gamma = gamma;
      if (!(alpha >= 0.0 && alpha < 1.0 && gamma >= 0.0 && gamma * alpha < 1.0)) continue;
      if (candidate.distribution == BurnDistribution::kBinomial &&
          (candidate.forward_mean() > candidate.binomial_cap ||
           candidate.backward_mean() > candidate.binomial_cap)) {
        continue;
      }

      double objective = 0.0;
      for (std::size_t pair = 0; pair < observed.size(); ++pair) {
        GrowthOverlay& overlay = overlays[pair];
        const NodeId start = snapshots[pair].num_nodes();
        candidate.arrivals = snapshots[pair + 1].num_nodes() - start;
        std::vector<double> growth;
        std::vector<double> degree;
        for (std::uint32_t s = 0; s < grid.seeds_per_point; ++s) {
          SplitMix64 rng(derive_seed(derive_seed(point_seed, pair), s));
          overlay.reset();
          overlay.grow(candidate, rng);
          std::size_t out_edges = 0;
          for (NodeId v = start; v < overlay.num_nodes(); ++v) {
            out_edges += candidate.reverse_orientation ? overlay.added_in_degree(v)
                                                       : overlay.added_out_degree(v);
          }
          growth.push_back(static_cast<double>(overlay.added_edges().size()));
          degree.push_back(static_cast<double>(out_edges) / static_cast<double>(candidate.arrivals));
        }
        objective += relative_sq(median(growth), observed[pair].edge_growth) +
                     relative_sq(median(degree), observed[pair].arrival_out_degree);
      }
      objective /= static_cast<double>(observed.size());
      if (objective < best.objective) {
        best.objective = objective;
        best.params = candidate;
      }
    }
  }
  if (!std::isfinite(best.objective)) throw DataError("no admissible grid point");
  best.params.arrivals =
      snapshots.back().num_nodes() - snapshots[snapshots.size() - 2].num_nodes();
  return best;
}

std::string format_ffm_params(const FfmParams& params) {
  std::ostringstream out;
  out.precision(17);
  out << "alpha = " << params.alpha << '\n'
      << "gamma = " << params.gamma << '\n'
      << "arrivals = " << params.arrivals << '\n'
      << "distribution = "
      << (params.distribution == BurnDistribution::kGeometric ? "geometric" : "binomial") << '\n'
      << "binomial_cap = " << params.binomial_cap << '\n'
      << "recurse_backward = " << (params.recurse_backward ? "true" : "false") << '\n'
      << "reverse_orientation = " << (params.reverse_orientation ? "true" : "false") << '\n';
  return out.str();
}

FfmParams parse_ffm_params(const std::string& text) {
  const KeyValues kv = KeyValues::parse(text);
  FfmParams params;
  params.alpha = kv.get_double("alpha", params.alpha);
  params.gamma = kv.get_double("gamma", params.gamma);
  params.arrivals = kv.get_uint("arrivals", 0);
  const std::string dist = kv.get_string("distribution", "geometric");
  if (dist == "geometric") {
    params.distribution = BurnDistribution::kGeometric;
  } else if (dist == "binomial") {
    params.distribution = BurnDistribution::kBinomial;
  } else {
    throw ConfigError("distribution must be geometric or binomial");
  }
  params.binomial_cap = static_cast<std::uint32_t>(kv.get_uint("binomial_cap", 10));
  params.recurse_backward = kv.get_bool("recurse_backward", false);
  params.reverse_orientation = kv.get_bool("reverse_orientation", false);
  if (auto unused = kv.unused_keys(); !unused.empty()) {
    throw ConfigError("unknown FFM parameter key '" + unused.front() + "'");
  }
  try {
    params.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return params;
}

}  // namespace evoim
