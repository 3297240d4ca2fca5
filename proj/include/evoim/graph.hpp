#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace evoim {

using NodeId = std::uint32_t;
// Position of an edge in the out-adjacency (CSR) order of a Graph.
using EdgeIndex = std::uint32_t;
using Timestamp = std::int64_t;

struct Edge {
  NodeId src;
  NodeId dst;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Bijection between external labels and dense node ids.
class LabelTable {
 public:
  // Returns the id of `label`, assigning the next free id on first sight.
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

// Immutable directed graph in compressed sparse row form, with both out- and
// in-adjacency. Self-loops are dropped and parallel edges collapsed on
// construction; neighbor lists are sorted by id.
class Graph {
 public:
  Graph() = default;

  // Builds from an edge list over ids [0, n). Ids >= n are a contract violation.
  static Graph from_edges(NodeId n, std::vector<Edge> edges, LabelTable labels = {});

  NodeId num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const;
  std::span<const NodeId> in_neighbors(NodeId v) const;
  std::size_t out_degree(NodeId v) const { return out_neighbors(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }

  // Edge-index range of v's out-edges: [out_begin(v), out_begin(v + 1)).
  EdgeIndex out_begin(NodeId v) const noexcept { return out_offsets_[v]; }
  // In-CSR position range of v's in-edges.
  EdgeIndex in_begin(NodeId v) const noexcept { return in_offsets_[v]; }

  // All edges in edge-index order (sorted by (src, dst)).
  std::vector<Edge> edges() const;

  // Labels are optional. Without a table a node's label is its decimal id;
  // nodes beyond the table (e.g. predicted arrivals) are labelled "+<id>".
  const LabelTable& labels() const noexcept { return labels_; }
  std::string label(NodeId v) const;

  std::size_t duplicates_collapsed() const noexcept { return duplicates_; }
  std::size_t self_loops_dropped() const noexcept { return self_loops_; }

  Graph reversed() const;

 private:
  NodeId n_ = 0;
  std::vector<EdgeIndex> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<EdgeIndex> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  LabelTable labels_;
  std::size_t duplicates_ = 0;
  std::size_t self_loops_ = 0;
};

struct EdgeEvent {
  NodeId src;
  NodeId dst;
  Timestamp time;
};

// Timestamped edge stream. Events are kept sorted by time; ties keep input order.
class TemporalGraph {
 public:
  TemporalGraph() = default;
  TemporalGraph(std::vector<EdgeEvent> events, LabelTable labels);

  std::span<const EdgeEvent> events() const noexcept { return events_; }
  const LabelTable& labels() const noexcept { return labels_; }

  // Edges with time <= cut and their endpoints. Node ids are re-densified in
  // ascending order of the stream ids; labels carry over.
  Graph snapshot_at(Timestamp cut) const;

 private:
  std::vector<EdgeEvent> events_;
  LabelTable labels_;
};

struct ReadOptions {
  bool reverse_edges = false;
  // Extra node labels (isolated nodes) added before any edge is read.
  std::vector<std::string> node_list;
};

// Edge-list text: one "src dst" or "src dst time" per line, '#' comments.
Graph read_edge_list(std::istream& in, const ReadOptions& options = {});
TemporalGraph read_temporal_edge_list(std::istream& in, const ReadOptions& options = {});
std::variant<Graph, TemporalGraph> load_edge_list(std::istream& in, bool timestamped,
                                                 const ReadOptions& options = {});
// One label per line, '#' comments.
std::vector<std::string> read_node_list(std::istream& in);

Graph load_graph_file(const std::string& path, const ReadOptions& options = {});
TemporalGraph load_temporal_file(const std::string& path, const ReadOptions& options = {});

void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace evoim
