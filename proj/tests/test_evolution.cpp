#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "evoim/bench.hpp"
#include "evoim/error.hpp"
#include "evoim/evolution.hpp"
#include "oracles.hpp"

using namespace evoim;

namespace {

Graph single_node() { return Graph::from_edges(1, {}); }

std::set<Edge> edge_set(const Graph& g) {
  const auto e = g.edges();
  return {e.begin(), e.end()};
}

}  // namespace

TEST_CASE("no arrivals leaves the graph unchanged") {
  std::mt19937_64 rng(1);
  const Graph g = oracle::random_graph(rng, 7, 15);
  const EvolvedGraph out = evolve(g, FfmParams{}, 5);
  CHECK(out.original_n == g.num_nodes());
  CHECK(out.graph.edges() == g.edges());
}

TEST_CASE("alpha = 0 grows a pure ambassador tree") {
  FfmParams params;
  params.alpha = 0.0;
  params.gamma = 0.9;
  params.arrivals = 5;
  const EvolvedGraph out = evolve(single_node(), params, 3);
  CHECK(out.graph.num_nodes() == 6);
  CHECK(out.graph.num_edges() == 5);
  for (NodeId v = 1; v < 6; ++v) CHECK(out.graph.out_degree(v) == 1);
}

TEST_CASE("evolve rejects an empty graph and bad parameters") {
  CHECK_THROWS_AS(evolve(Graph{}, FfmParams{}, 1), ContractViolation);
  FfmParams bad;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(evolve(single_node(), bad, 1), ContractViolation);
  bad = {};
  bad.alpha = 0.5;
  bad.gamma = 2.0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("property: growth adds exactly r nodes and keeps every old edge") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = oracle::random_graph(rng, 1 + trial % 8, 20);
    FfmParams params{0.2 + 0.02 * trial, 0.5, static_cast<std::uint64_t>(1 + trial * 3)};
    params.recurse_backward = trial % 2 == 1;
    if (trial % 3 == 0) params.distribution = BurnDistribution::kBinomial;
    const EvolvedGraph out = evolve(g, params, rng());
    CHECK(out.graph.num_nodes() == g.num_nodes() + params.arrivals);
    const auto before = edge_set(g);
    const auto after = edge_set(out.graph);
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    for (NodeId v = g.num_nodes(); v < out.graph.num_nodes(); ++v) {
      CHECK(out.graph.out_degree(v) >= 1);
    }
  }
}

TEST_CASE("property: each arrival links a node at most once") {
  // Parallel edges would be collapsed by the Graph, so check the raw overlay.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = grow_from_single_node(60, {0.6, 0.9}, trial);
    GrowthOverlay overlay(g);
    SplitMix64 gen(trial);
    FfmParams params{0.6, 0.9, 40};
    params.recurse_backward = trial % 2 == 0;
    overlay.grow(params, gen);
    std::map<NodeId, std::multiset<NodeId>> partners;
    for (const Edge& e : overlay.added_edges()) {
      const NodeId arrival = std::max(e.src, e.dst);
      CHECK(arrival >= g.num_nodes());
      partners[arrival].insert(std::min(e.src, e.dst));
    }
    for (const auto& [arrival, others] : partners) {
      CHECK(std::set<NodeId>(others.begin(), others.end()).size() == others.size());
    }
  }
}

TEST_CASE("evolve is deterministic for a seed") {
  const Graph g = grow_from_single_node(50, FfmParams::synthetic_preset(), 1);
  FfmParams params = FfmParams::synthetic_preset();
  params.arrivals = 80;
  CHECK(evolve(g, params, 9).graph.edges() == evolve(g, params, 9).graph.edges());
  CHECK(evolve(g, params, 9).graph.edges() != evolve(g, params, 10).graph.edges());
}

TEST_CASE("overlay coin indices continue after the base edges") {
  const Graph g = grow_from_single_node(20, FfmParams::synthetic_preset(), 4);
  GrowthOverlay overlay(g);
  SplitMix64 rng(4);
  FfmParams params = FfmParams::synthetic_preset();
  params.arrivals = 30;
  overlay.grow(params, rng);
  std::set<std::uint32_t> indices;
  for (NodeId v = 0; v < overlay.num_nodes(); ++v) {
    overlay.for_each_in_edge(v, [&](NodeId, std::uint32_t c) { indices.insert(c); });
  }
  CHECK(indices.size() == overlay.num_edges());
  CHECK(*indices.rbegin() == overlay.num_edges() - 1);
  overlay.reset();
  CHECK(overlay.num_nodes() == g.num_nodes());
  CHECK(overlay.added_edges().empty());
}

TEST_CASE("fitting recovers alpha from its own growth (median of 10 trials)") {
  std::vector<double> fitted;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    SyntheticSpec spec;
    spec.seed_nodes = 300;
    spec.ffm = {0.3, 0.3};
    spec.snapshot_arrivals = {0, 150, 300};
    const auto snapshots = generate_synthetic(spec, 100 + trial);
    const FitResult fit = fit_parameters(snapshots, FitGrid::uniform(), trial);
    CHECK(fit.params.arrivals == 150);
    fitted.push_back(fit.params.alpha);
  }
  std::sort(fitted.begin(), fitted.end());
  const double median = 0.5 * (fitted[4] + fitted[5]);
  CHECK(std::abs(median - 0.3) <= 0.1);
}

TEST_CASE("fitting errors and degenerate grids") {
  const Graph g = grow_from_single_node(30, FfmParams::synthetic_preset(), 1);
  const std::vector<Graph> same{g, g};
  CHECK_THROWS_AS(fit_parameters(same, FitGrid::uniform(), 1), DataError);
  CHECK_THROWS_AS(fit_parameters(std::span<const Graph>(same.data(), 1), FitGrid::uniform(), 1),
                  DataError);

  FfmParams params = FfmParams::synthetic_preset();
  params.arrivals = 20;
  const std::vector<Graph> pair{g, evolve(g, params, 2).graph};
  FitGrid one;
  one.alphas = {0.25};
  one.gammas = {0.6};
  const FitResult fit = fit_parameters(pair, one, 1);
  CHECK(fit.params.alpha == 0.25);
  CHECK(fit.params.gamma == 0.6);
  CHECK(fit.params.arrivals == 20);
}

TEST_CASE("reversed orientation stores the same links flipped") {
  FfmParams params = FfmParams::synthetic_preset();
  params.arrivals = 120;
  FfmParams flipped = params;
  flipped.reverse_orientation = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = grow_from_single_node(60, FfmParams::synthetic_preset(), seed);
    const Graph forward = evolve(g, params, seed).graph;
    const Graph backward = evolve(g.reversed(), flipped, seed).graph;
    CHECK(edge_set(backward) == edge_set(forward.reversed()));
  }
}

TEST_CASE("parameter text round trip") {
  FfmParams params{0.19, 0.75, 1234};
  params.distribution = BurnDistribution::kBinomial;
  params.binomial_cap = 7;
  params.recurse_backward = true;
  params.reverse_orientation = true;
  const FfmParams back = parse_ffm_params(format_ffm_params(params));
  CHECK(back.alpha == params.alpha);
  CHECK(back.gamma == params.gamma);
  CHECK(back.arrivals == params.arrivals);
  CHECK(back.distribution == params.distribution);
  CHECK(back.binomial_cap == 7);
  CHECK(back.recurse_backward);
  CHECK(back.reverse_orientation);
  CHECK_THROWS_AS(parse_ffm_params("alpha = 0.3\nbeta = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ffm_params("alpha = 1.3\n"), ConfigError);
}
