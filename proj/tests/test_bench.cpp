#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "evoim/bench.hpp"
#include "evoim/error.hpp"

using namespace evoim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("evoim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_graph(const fs::path& path, const Graph& g) {
  std::ofstream out(path);
  write_edge_list(g, out);
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig parse_config(const std::string& text) {
  return ExperimentConfig::from_key_values(KeyValues::parse(text));
}

std::vector<NodeId> identity(NodeId n) {
  std::vector<NodeId> m(n);
  for (NodeId v = 0; v < n; ++v) m[v] = v;
  return m;
}

}  // namespace

TEST_CASE("counterexample to the static guarantee") {
  const Theorem1Result five = theorem1_scenario(10, 5, 7);
  CHECK(five.sigma_classical == 6);
  CHECK(five.sigma_optimal == 10);
  CHECK(five.bound_holds);
  CHECK(five.bound == doctest::Approx(6.3212).epsilon(1e-4));

  const Theorem1Result three = theorem1_scenario(10, 3, 7);
  CHECK(three.sigma_classical == 4);
  CHECK(three.sigma_optimal == 6);
  CHECK_FALSE(three.bound_holds);

  const Theorem1Result one = theorem1_scenario(10, 1, 7);
  CHECK(one.sigma_classical == 2);
  CHECK(one.sigma_optimal == 2);
  CHECK_FALSE(one.bound_holds);

  // k >= 4 is where the inequality starts to hold.
  for (std::uint32_t k = 4; k <= 8; ++k) CHECK(theorem1_scenario(k + 1, k, k + 2).bound_holds);

  CHECK_THROWS_AS(theorem1_scenario(10, 5, 5), ContractViolation);
  CHECK_THROWS_AS(theorem1_scenario(4, 5, 7), ContractViolation);
}

TEST_CASE("synthetic snapshots are nested") {
  SyntheticSpec spec;
  spec.seed_nodes = 200;
  spec.snapshot_arrivals = {0, 500, 1000};
  const auto snaps = generate_synthetic(spec, 3);
  REQUIRE(snaps.size() == 3);
  CHECK(snaps[0].num_nodes() == 200);
  CHECK(snaps[1].num_nodes() == 700);
  CHECK(snaps[2].num_nodes() == 1200);
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    const auto a = snaps[i].edges();
    const auto b = snaps[i + 1].edges();
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
  CHECK(generate_synthetic(spec, 3)[2].edges() == snaps[2].edges());
  CHECK(spec.ffm.alpha == 0.35);
  CHECK(spec.ffm.gamma == 0.32);
}

TEST_CASE("rank scatter") {
  const Graph g = grow_from_single_node(50, FfmParams::synthetic_preset(), 2);
  const RankedSeedSet truth = select_degree(g, 5);
  const auto map = identity(g.num_nodes());

  SUBCASE("self comparison lies on the diagonal") {
    const RankScatter s = rank_scatter(truth, truth, map, g, 5);
    CHECK(s.points.size() == 5);
    CHECK(s.mean_deviation == 0.0);
    for (const auto& p : s.points) CHECK(p.rank_current == p.rank_future);
  }
  SUBCASE("same graph, same deterministic algorithm") {
    const RankScatter s = rank_scatter(select_degree(g, 5), truth, map, g, 5);
    CHECK(s.mean_deviation == 0.0);
  }
  SUBCASE("missing and absent seeds") {
    RankedSeedSet other = truth;
    std::swap(other.entries[0].node, other.entries[1].node);
    other.entries[4].node = truth.entries[4].node + 1000;  // never matches
    auto partial = map;
    partial[truth.entries[2].node] = kAbsentNode;  // not in the current graph
    const RankScatter s = rank_scatter(other, truth, partial, g, 5);
    REQUIRE(s.points.size() == 4);
    CHECK(s.points[0].rank_current == 2);
    CHECK(s.points[1].rank_current == 1);
    CHECK(s.points[3].rank_current == 6);
    CHECK(s.mean_deviation == doctest::Approx((1 + 1 + 0 + 1) / 4.0));
  }
}

TEST_CASE("seed record round trip") {
  LabelTable labels;
  for (const char* l : {"alice", "bob", "carol"}) labels.intern(l);
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}}, labels);
  RankedSeedSet set;
  set.entries = {{2, 1, 17.5}, {0, 2, 3.0}};
  set.padded = true;
  SelectionConfig cfg;
  cfg.theta.theta_override = 77;
  const SeedRecord record = make_seed_record(
      "seer", selection_config_json(Algorithm::kSeer, cfg), 42, g, set);
  const std::string line = format_seed_record(record);
  CHECK(line.find('\n') == std::string::npos);
  const SeedRecord back = parse_seed_record(line);
  CHECK(back.algorithm == "seer");
  CHECK(back.seed == 42);
  CHECK(back.padded);
  REQUIRE(back.seeds.size() == 2);
  CHECK(back.seeds[0].label == "carol");
  CHECK(back.seeds[1].rank == 2);
  CHECK(back.seeds[0].score == 17.5);
  CHECK(format_seed_record(back) == line);
  CHECK(back.config_json.find("\"theta\":77") != std::string::npos);

  CHECK(resolve_seeds(back, g) == SeedSet{2, 0});
  LabelTable fewer;
  fewer.intern("carol");
  const Graph other = Graph::from_edges(1, {}, fewer);
  CHECK(resolve_seeds(back, other) == SeedSet{0, kAbsentNode});
  CHECK_THROWS_AS(parse_seed_record("{\"seeds\": []}"), ParseError);
  CHECK_THROWS_AS(parse_seed_record("not json"), ParseError);
}

TEST_CASE("experiment config parsing") {
  const ExperimentConfig cfg = parse_config(
      "# comment\nalgorithms = seer, greedy\nk = 4\np = 0.05\ntheta = 900\npreset = hep\n"
      "trials = 3\nseed = 9\n");
  CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::kSeer, Algorithm::kGreedy});
  CHECK(cfg.selection.k == 4);
  CHECK(cfg.selection.theta.theta_override == 900);
  CHECK(cfg.selection.ffm.alpha == 0.19);
  CHECK(cfg.scatter_top == 4);
  CHECK(cfg.synthetic());
  // The echo parses back to the same configuration.
  CHECK(parse_config(cfg.echo()).echo() == cfg.echo());

  const ExperimentConfig d = ExperimentConfig::defaults();
  CHECK(d.selection.p == 0.01);
  CHECK(d.selection.instances == 500);
  CHECK(d.selection.rounds == 5000);
  CHECK(d.eval_rounds == 10000);

  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("algorithms = irie\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("graph = a.txt\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("temporal = a.txt\ncut_current = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = 3\nk = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = three\n"), ConfigError);
}

TEST_CASE("paired comparison") {
  const std::vector<double> a{3, 4, 5}, b{2, 2, 2};
  const PairedComparison c = paired_compare(a, b);
  CHECK(c.mean_difference == doctest::Approx(2.0));
  CHECK(c.t_statistic == doctest::Approx(std::sqrt(12.0)));
  // Student t with 2 degrees of freedom: P(T > t) = 1/2 - t / (2 sqrt(t^2 + 2)).
  CHECK(c.p_value == doctest::Approx(0.5 - std::sqrt(12.0) / (2 * std::sqrt(14.0))));
  CHECK(paired_compare(b, a).p_value > 0.9);
}

TEST_CASE("identical current and future snapshots give ratios near 1") {
  const fs::path dir = scratch_dir("same_graph");
  const Graph g = grow_from_single_node(150, FfmParams::synthetic_preset(), 8);
  const std::string path = write_graph(dir / "g.txt", g);
  const ExperimentConfig cfg = parse_config(
      "graph = " + path + "\nfuture_graph = " + path +
      "\nalgorithms = seer, genie, greedy\nk = 3\np = 0.1\nI = 2\nR = 2000\ntheta = 1000000\n"
      "eval_rounds = 20000\nseed = 5\n");
  const ExperimentReport report = run_comparison(cfg);
  REQUIRE(report.trials.size() == 1);
  CHECK(report.trials[0].predicted_arrivals == 0);
  for (const AlgorithmRun& run : report.trials[0].runs) {
    INFO(algorithm_name(run.algorithm));
    CHECK(std::abs(run.ratio - 1.0) < 0.03);
    const double se = run.spread.std_error / report.trials[0].truth_spread.mean;
    CHECK(run.ratio <= 1.0 + 3.0 * se + 0.01);
  }
}

TEST_CASE("degree baseline is dominated on a star plus a path") {
  // Hub 0 -> 1..5, path 6 -> 7 -> ... -> 26.
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= 5; ++v) edges.push_back({0, v});
  for (NodeId v = 6; v < 26; ++v) edges.push_back({v, v + 1});
  const fs::path dir = scratch_dir("star_path");
  const std::string path = write_graph(dir / "g.txt", Graph::from_edges(27, edges));
  const ExperimentConfig cfg = parse_config("graph = " + path + "\nfuture_graph = " + path +
                                            "\nalgorithms = greedy, degree\nk = 1\np = 1\n"
                                            "R = 10\neval_rounds = 10\n");
  const ExperimentReport report = run_comparison(cfg);
  const double greedy = ratios_of(report, Algorithm::kGreedy).at(0);
  const double degree = ratios_of(report, Algorithm::kDegree).at(0);
  CHECK(greedy == 1.0);
  CHECK(degree == doctest::Approx(6.0 / 21.0));
}

TEST_CASE("reports are byte-identical across runs") {
  const ExperimentConfig cfg = parse_config(
      "synthetic_nodes = 120\ngrowth = 0.25\nalgorithms = seer, genie, greedy, degree\nk = 3\n"
      "p = 0.1\nI = 3\nR = 100\ntheta = 3000\neval_rounds = 2000\ntrials = 2\nseed = 11\n");
  const fs::path a = scratch_dir("report_a"), b = scratch_dir("report_b");
  write_report(run_comparison(cfg), a);
  write_report(run_comparison(cfg), b);
  for (const char* f : {"config.txt", "metrics.csv", "summary.csv", "scatter.csv",
                        "seeds_ground_truth.jsonl", "seeds_seer.jsonl", "seeds_genie.jsonl",
                        "seeds_greedy.jsonl", "seeds_degree.jsonl"}) {
    INFO(f);
    CHECK(!slurp(a / f).empty());
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(fs::exists(a / "timings.csv"));
}

TEST_CASE("GENIE rank deviation no worse than static greedy (median of 10 trials)") {
  const ExperimentConfig cfg = parse_config(
      "synthetic_nodes = 300\ngrowth = 0.25\nalgorithms = genie, greedy\nk = 5\np = 0.05\n"
      "I = 20\nR = 300\ntruth_rounds = 1000\neval_rounds = 100\ntrials = 10\nseed = 21\n");
  const ExperimentReport report = run_comparison(cfg);
  std::vector<double> genie, greedy;
  for (const TrialResult& t : report.trials) {
    for (const AlgorithmRun& r : t.runs) {
      (r.algorithm == Algorithm::kGenie ? genie : greedy).push_back(r.scatter.mean_deviation);
    }
  }
  std::sort(genie.begin(), genie.end());
  std::sort(greedy.begin(), greedy.end());
  const double genie_median = 0.5 * (genie[4] + genie[5]);
  const double greedy_median = 0.5 * (greedy[4] + greedy[5]);
  MESSAGE("median deviation genie " << genie_median << " greedy " << greedy_median);
  CHECK(genie_median <= greedy_median);
}
