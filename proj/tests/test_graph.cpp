#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "evoim/error.hpp"
#include "evoim/graph.hpp"
#include "oracles.hpp"

using namespace evoim;

namespace {

Graph parse(const std::string& text, const ReadOptions& options = {}) {
  std::istringstream in(text);
  return read_edge_list(in, options);
}

std::set<std::pair<std::string, std::string>> labelled_edges(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const Edge& e : g.edges()) out.emplace(g.label(e.src), g.label(e.dst));
  return out;
}

void check_degree_bookkeeping(const Graph& g) {
  std::size_t out_sum = 0, in_sum = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out_sum += g.out_degree(v);
    in_sum += g.in_degree(v);
  }
  CHECK(out_sum == g.num_edges());
  CHECK(in_sum == g.num_edges());
}

}  // namespace

TEST_CASE("edge list with two edges") {
  const Graph g = parse("1 2\n2 3");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.label(0) == "1");
  CHECK(labelled_edges(g) == std::set<std::pair<std::string, std::string>>{{"1", "2"}, {"2", "3"}});
}

TEST_CASE("duplicate edges collapse, reverse direction is kept") {
  const Graph g = parse("1 2\n1 2\n2 1");
  CHECK(g.num_edges() == 2);
  CHECK(g.duplicates_collapsed() == 1);
}

TEST_CASE("comments, blank lines and self loops") {
  const Graph g = parse("# header\n\n  a b  \n# x y\nb b\n\tb c\r\n");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.self_loops_dropped() == 1);
}

TEST_CASE("timestamped edge list") {
  std::istringstream in("a b 5\nb c 10");
  auto loaded = load_edge_list(in, true);
  REQUIRE(std::holds_alternative<TemporalGraph>(loaded));
  const auto& tg = std::get<TemporalGraph>(loaded);
  CHECK(tg.events().size() == 2);
  CHECK(tg.labels().size() == 3);
}

TEST_CASE("events are ordered by time with ties in input order") {
  std::istringstream in("x y 7\na b 3\nc d 7\ne f 3");
  const TemporalGraph tg = read_temporal_edge_list(in);
  std::vector<std::string> order;
  for (const auto& e : tg.events()) order.push_back(tg.labels().label(e.src));
  CHECK(order == std::vector<std::string>{"a", "e", "x", "c"});
}

TEST_CASE("parse errors name the line") {
  SUBCASE("single field") {
    try {
      parse("1 2\n3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("too many fields") { CHECK_THROWS_AS(parse("1 2 3 4\n"), ParseError); }
  SUBCASE("timestamp missing when required") {
    std::istringstream in("a b 1\nb c\n");
    try {
      read_temporal_edge_list(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("timestamp not an integer") {
    std::istringstream in("a b x\n");
    CHECK_THROWS_AS(read_temporal_edge_list(in), ParseError);
  }
  SUBCASE("negative timestamp") {
    std::istringstream in("a b -1\n");
    CHECK_THROWS_AS(read_temporal_edge_list(in), ParseError);
  }
}

TEST_CASE("snapshot_at filters by cut") {
  std::istringstream in("a b 5\nb c 10");
  const TemporalGraph tg = read_temporal_edge_list(in);

  const Graph at7 = tg.snapshot_at(7);
  CHECK(at7.num_nodes() == 2);
  CHECK(labelled_edges(at7) == std::set<std::pair<std::string, std::string>>{{"a", "b"}});

  const Graph at10 = tg.snapshot_at(10);
  CHECK(at10.num_edges() == 2);
  CHECK(at10.num_nodes() == 3);

  const Graph at0 = tg.snapshot_at(0);
  CHECK(at0.num_nodes() == 0);
  CHECK(at0.num_edges() == 0);
}

TEST_CASE("snapshot_at is monotone in the cut") {
  std::mt19937_64 rng(11);
  std::ostringstream text;
  std::uniform_int_distribution<int> node(0, 40), time(0, 100);
  for (int i = 0; i < 300; ++i) text << node(rng) << ' ' << node(rng) << ' ' << time(rng) << '\n';
  std::istringstream in(text.str());
  const TemporalGraph tg = read_temporal_edge_list(in);
  auto previous = labelled_edges(tg.snapshot_at(-1));
  for (Timestamp cut = 0; cut <= 100; cut += 5) {
    const Graph snap = tg.snapshot_at(cut);
    check_degree_bookkeeping(snap);
    const auto current = labelled_edges(snap);
    CHECK(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
    previous = current;
  }
}

TEST_CASE("neighbors are exact and sorted") {
  const Graph star = parse("c x3\nc x1\nc x5\nc x2\nc x4\n");
  const NodeId c = *star.labels().find("c");
  const NodeId x1 = *star.labels().find("x1");
  CHECK(star.out_neighbors(c).size() == 5);
  CHECK(std::is_sorted(star.out_neighbors(c).begin(), star.out_neighbors(c).end()));
  REQUIRE(star.in_neighbors(x1).size() == 1);
  CHECK(star.in_neighbors(x1)[0] == c);
  CHECK(star.out_neighbors(x1).empty());
  CHECK_THROWS_AS(star.out_neighbors(star.num_nodes()), ContractViolation);
}

TEST_CASE("isolated nodes come from a node list") {
  std::istringstream nodes("# isolated\nlonely\n");
  ReadOptions options;
  options.node_list = read_node_list(nodes);
  const Graph g = parse("a b\n", options);
  CHECK(g.num_nodes() == 3);
  const NodeId lonely = *g.labels().find("lonely");
  CHECK(g.out_neighbors(lonely).empty());
  CHECK(g.in_neighbors(lonely).empty());
}

TEST_CASE("reverse_edges flips every edge") {
  ReadOptions options;
  options.reverse_edges = true;
  const Graph g = parse("a b\nb c\n", options);
  CHECK(labelled_edges(g) == std::set<std::pair<std::string, std::string>>{{"b", "a"}, {"c", "b"}});
  CHECK(labelled_edges(g.reversed()) == labelled_edges(parse("a b\nb c\n")));
}

TEST_CASE("property: write and reload gives the same labelled graph") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(rng, 2 + trial % 9, 30);
    check_degree_bookkeeping(g);
    std::ostringstream out;
    write_edge_list(g, out);
    const Graph back = parse(out.str());
    CHECK(back.num_edges() == g.num_edges());
    CHECK(labelled_edges(back) == labelled_edges(g));
    check_degree_bookkeeping(back);
  }
}

TEST_CASE("from_edges rejects ids outside the node range") {
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), ContractViolation);
}
