#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gnp/graph.hpp"

namespace gnp {

// Path profiles of every node of a rooted graph, stored as edge-id sets
// (never as enumerated path lists):
//   incoming(v): edges lying on some root->v walk, i.e. every edge whose
//                target still reaches v;
//   outgoing(v): edges reachable from v, i.e. every edge whose source is
//                reachable from v.
// Edge ids index the canonical (src,dst)-ascending edge order of the graph;
// per-node id lists are strictly ascending.
struct ProfileSet {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::vector<std::uint32_t>> incoming;
  std::vector<std::vector<std::uint32_t>> outgoing;

  std::uint32_t node_count() const {
    return static_cast<std::uint32_t>(incoming.size());
  }
};

// Read-only view of one node's profile.
struct ProfileView {
  std::span<const std::uint32_t> incoming;
  std::span<const std::uint32_t> outgoing;
};

inline ProfileView profile_of(const ProfileSet& p, NodeId v) {
  return {std::span(p.incoming[v]), std::span(p.outgoing[v])};
}

// Collects both profiles for every node (per-node reachability sweeps).
// The pricing pipeline runs this over the dominator tree; the raw-graph
// variant exists for direct use on small graphs.
ProfileSet collect_profiles(const RootedGraph& rg, int threads = 0);

}  // namespace gnp
