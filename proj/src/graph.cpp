#include "evoim/graph.hpp"

#include <algorithm>
#include <numeric>

#include "evoim/error.hpp"

namespace evoim {

NodeId LabelTable::intern(std::string_view label) {
  std::string key(label);
  auto [it, inserted] = ids_.try_emplace(key, static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.push_back(std::move(key));
  return it->second;
}

std::optional<NodeId> LabelTable::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Graph Graph::from_edges(NodeId n, std::vector<Edge> edges, LabelTable labels) {
  Graph g;
  g.n_ = n;
  g.labels_ = std::move(labels);

  const auto loops = std::erase_if(edges, [](const Edge& e) { return e.src == e.dst; });
  g.self_loops_ = loops;
  for (const Edge& e : edges) {
    require(e.src < n && e.dst < n, "edge endpoint outside [0, n)");
  }
  std::sort(edges.begin(), edges.end());
  const auto unique_end = std::unique(edges.begin(), edges.end());
  g.duplicates_ = static_cast<std::size_t>(edges.end() - unique_end);
  edges.erase(unique_end, edges.end());

  g.out_offsets_.assign(std::size_t{n} + 1, 0);
  g.in_offsets_.assign(std::size_t{n} + 1, 0);
  for (const Edge& e : edges) {
    ++g.out_offsets_[e.src + 1];
    ++g.in_offsets_[e.dst + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

  g.out_targets_.resize(edges.size());
  g.in_sources_.resize(edges.size());
  std::vector<EdgeIndex> fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // Edges are sorted by (src, dst), so both CSR arrays come out sorted.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    g.out_targets_[i] = edges[i].dst;
    g.in_sources_[fill[edges[i].dst]++] = edges[i].src;
  }
  return g;
}

std::span<const NodeId> Graph::out_neighbors(NodeId v) const {
  require(v < n_, "node id out of range");
  return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const NodeId> Graph::in_neighbors(NodeId v) const {
  require(v < n_, "node id out of range");
  return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId v = 0; v < n_; ++v) {
    for (NodeId w : out_neighbors(v)) out.push_back({v, w});
  }
  return out;
}

std::string Graph::label(NodeId v) const {
  if (labels_.empty()) return std::to_string(v);
  if (v < labels_.size()) return labels_.label(v);
  return "+" + std::to_string(v);
}

Graph Graph::reversed() const {
  std::vector<Edge> rev;
  rev.reserve(num_edges());
  for (const Edge& e : edges()) rev.push_back({e.dst, e.src});
  return from_edges(n_, std::move(rev), labels_);
}

TemporalGraph::TemporalGraph(std::vector<EdgeEvent> events, LabelTable labels)
    : events_(std::move(events)), labels_(std::move(labels)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) { return a.time < b.time; });
}

Graph TemporalGraph::snapshot_at(Timestamp cut) const {
  const auto end = std::upper_bound(events_.begin(), events_.end(), cut,
                                    [](Timestamp t, const EdgeEvent& e) { return t < e.time; });
  std::vector<NodeId> present;
  for (auto it = events_.begin(); it != end; ++it) {
    if (it->src == it->dst) continue;
    present.push_back(it->src);
    present.push_back(it->dst);
  }
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());

  auto dense = [&](NodeId id) {
    return static_cast<NodeId>(std::lower_bound(present.begin(), present.end(), id) -
                               present.begin());
  };
  LabelTable labels;
  for (NodeId id : present) labels.intern(labels_.label(id));

  std::vector<Edge> edges;
  for (auto it = events_.begin(); it != end; ++it) {
    if (it->src == it->dst) continue;
    edges.push_back({dense(it->src), dense(it->dst)});
  }
  return Graph::from_edges(static_cast<NodeId>(present.size()), std::move(edges),
                           std::move(labels));
}

}  // namespace evoim
