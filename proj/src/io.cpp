#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "evoim/error.hpp"
#include "evoim/graph.hpp"

namespace evoim {
namespace {

struct RawLine {
  std::string_view fields[3];
  int count = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits a line into at most three whitespace-separated fields. Returns false
// for blank and comment lines.
bool split_fields(std::string_view line, std::size_t line_no, RawLine& out) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == line.size() || line[i] == '#') return false;
  out.count = 0;
  while (i < line.size()) {
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (out.count == 3) throw ParseError(line_no, "expected at most 3 fields");
    out.fields[out.count++] = line.substr(i, j - i);
    while (j < line.size() && is_space(line[j])) ++j;
    i = j;
  }
  if (out.count < 2) throw ParseError(line_no, "expected \"src dst\" or \"src dst time\"");
  return true;
}

Timestamp parse_time(std::string_view field, std::size_t line_no) {
  Timestamp t = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), t);
  if (ec != std::errc{} || ptr != field.data() + field.size() || t < 0) {
    throw ParseError(line_no, "timestamp must be a non-negative integer, got \"" +
                                  std::string(field) + "\"");
  }
  return t;
}

template <typename OnEdge>
LabelTable scan(std::istream& in, const ReadOptions& options, bool timestamped, OnEdge on_edge) {
  LabelTable labels;
  for (const auto& name : options.node_list) labels.intern(name);
  std::string line;
  std::size_t line_no = 0;
  RawLine raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_fields(line, line_no, raw)) continue;
    if (timestamped && raw.count < 3) throw ParseError(line_no, "missing timestamp field");
    const Timestamp t = raw.count == 3 ? parse_time(raw.fields[2], line_no) : 0;
    NodeId a = labels.intern(raw.fields[0]);
    NodeId b = labels.intern(raw.fields[1]);
    if (options.reverse_edges) std::swap(a, b);
    on_edge(a, b, t);
  }
  if (in.bad()) throw ParseError(0, "read failure");
  return labels;
}

}  // namespace

Graph read_edge_list(std::istream& in, const ReadOptions& options) {
  std::vector<Edge> edges;
  LabelTable labels =
      scan(in, options, false, [&](NodeId a, NodeId b, Timestamp) { edges.push_back({a, b}); });
  const auto n = static_cast<NodeId>(labels.size());
  return Graph::from_edges(n, std::move(edges), std::move(labels));
}

TemporalGraph read_temporal_edge_list(std::istream& in, const ReadOptions& options) {
  std::vector<EdgeEvent> events;
  LabelTable labels = scan(in, options, true,
                           [&](NodeId a, NodeId b, Timestamp t) { events.push_back({a, b, t}); });
  return TemporalGraph(std::move(events), std::move(labels));
}

std::variant<Graph, TemporalGraph> load_edge_list(std::istream& in, bool timestamped,
                                                 const ReadOptions& options) {
  if (timestamped) return read_temporal_edge_list(in, options);
  return read_edge_list(in, options);
}

std::vector<std::string> read_node_list(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#') continue;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    for (std::size_t k = j; k < line.size(); ++k) {
      if (!is_space(line[k])) throw ParseError(line_no, "expected one label per line");
    }
    names.emplace_back(line.substr(i, j - i));
  }
  return names;
}

namespace {
std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}
}  // namespace

Graph load_graph_file(const std::string& path, const ReadOptions& options) {
  auto in = open_input(path);
  try {
    return read_edge_list(in, options);
  } catch (const ParseError& e) {
    throw ParseError::in_context(e, path);
  }
}

TemporalGraph load_temporal_file(const std::string& path, const ReadOptions& options) {
  auto in = open_input(path);
  try {
    return read_temporal_edge_list(in, options);
  } catch (const ParseError& e) {
    throw ParseError::in_context(e, path);
  }
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::string from = g.label(v);
    for (NodeId w : g.out_neighbors(v)) out << from << ' ' << g.label(w) << '\n';
  }
}

}  // namespace evoim
