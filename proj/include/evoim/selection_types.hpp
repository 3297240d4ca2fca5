#pragma once

#include <cstdint>
#include <vector>

#include "evoim/graph.hpp"

namespace evoim {

struct RankedEntry {
  NodeId node = 0;
  std::uint32_t rank = 0;  // 1-based selection round
  double score = 0.0;      // algorithm-specific: gain, coverage or aggregate score

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Seeds in selection order; entries[j].rank == j + 1.
struct RankedSeedSet {
  std::vector<RankedEntry> entries;
  // Some entries were filled in without positive evidence (see max_coverage_select).
  bool padded = false;

  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.node);
    return out;
  }
  std::size_t size() const noexcept { return entries.size(); }

  friend bool operator==(const RankedSeedSet&, const RankedSeedSet&) = default;
};

}  // namespace evoim
