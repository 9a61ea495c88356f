#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gnp/graph.hpp"

namespace gnp {

// Immediate-dominator tree of a rooted graph. idom[root] == root; every
// other node's idom is a proper dominator. The tree has exactly n-1 edges.
struct DominatorTree {
  NodeId root = 0;
  bool virtual_root = false;
  std::vector<NodeId> idom;
  std::vector<std::uint32_t> desc_count;     // proper descendants per node
  std::vector<std::uint64_t> labels;         // carried from the rooted graph
  std::vector<std::uint32_t> child_offsets;  // size n+1, children ascending
  std::vector<NodeId> child_list;            // size n-1

  std::uint32_t n() const { return static_cast<std::uint32_t>(idom.size()); }
  std::span<const NodeId> children(NodeId v) const {
    return {child_list.data() + child_offsets[v],
            child_list.data() + child_offsets[v + 1]};
  }
  bool is_virtual(NodeId v) const { return virtual_root && v == root; }
};

// Lengauer-Tarjan with path compression, O(m log n). Deterministic: the
// DFS follows the canonical ascending adjacency, so the same graph always
// yields the same idom map regardless of input edge order.
DominatorTree compute_dominator_tree(const RootedGraph& rg);

// Nodes dominated by v (excluding v), by deleting v and re-running BFS from
// the root: exactly the nodes that become unreachable. Oracle for the tree;
// throws InputError when v is the root.
std::vector<NodeId> dominated_set_brute_force(const RootedGraph& rg, NodeId v);

// Proper-descendant counts from the idom map alone (one bottom-up pass).
std::vector<std::uint32_t> descendant_counts(const DominatorTree& t);

// The tree itself as a rooted graph (edges idom[v] -> v), for running the
// path-profile machinery over it.
RootedGraph tree_as_rooted_graph(const DominatorTree& t);

}  // namespace gnp
