#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gnp {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

// Label reserved for a synthetic entry node; never printed as a number.
inline constexpr std::uint64_t kSyntheticRootLabel = ~0ull;

// Immutable digraph with dense ids 0..n-1 in CSR form. Adjacency rows are
// ascending, edges are deduplicated, self-loops are absent. in_* is the
// exact transpose of out_*; in_edge_ids[k] is the position of that edge in
// the canonical (src, dst)-ascending edge order.
struct DirectedGraph {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::vector<std::uint64_t> out_offsets;  // size n+1
  std::vector<NodeId> out_targets;         // size m
  std::vector<std::uint64_t> in_offsets;   // size n+1
  std::vector<NodeId> in_sources;          // size m
  std::vector<std::uint32_t> in_edge_ids;  // size m
  std::vector<std::uint64_t> labels;       // id -> identifier from the source file
  // Optional numeric per-node attribute (consumed by the entropy baseline).
  // Empty when the input carried none; NaN marks individual absent values.
  std::vector<double> node_value;

  std::span<const NodeId> out(NodeId v) const {
    return {out_targets.data() + out_offsets[v],
            out_targets.data() + out_offsets[v + 1]};
  }
  std::span<const NodeId> in(NodeId v) const {
    return {in_sources.data() + in_offsets[v],
            in_sources.data() + in_offsets[v + 1]};
  }
  std::uint64_t out_degree(NodeId v) const {
    return out_offsets[v + 1] - out_offsets[v];
  }
  std::uint64_t in_degree(NodeId v) const {
    return in_offsets[v + 1] - in_offsets[v];
  }
  std::pair<NodeId, NodeId> edge(std::uint32_t edge_id) const;
};

// Builds the CSR form from (src, dst) id pairs. Sorts, deduplicates and
// drops self-loops. labels.size() fixes n; ids must be < n.
DirectedGraph make_graph(std::vector<std::uint64_t> labels,
                         std::vector<std::pair<NodeId, NodeId>> edges,
                         std::vector<double> node_value = {});

enum class RootPolicy { VirtualSuperRoot, Designated };

struct RootSpec {
  RootPolicy policy = RootPolicy::VirtualSuperRoot;
  std::uint64_t designated_label = 0;

  static RootSpec virtual_super_root() { return {}; }
  static RootSpec designated(std::uint64_t label) {
    return {RootPolicy::Designated, label};
  }
};

// A graph in which every node is reachable from `root`.
struct RootedGraph {
  DirectedGraph graph;
  NodeId root = 0;
  bool virtual_root_added = false;

  bool is_virtual(NodeId v) const { return virtual_root_added && v == root; }
  std::uint32_t real_node_count() const {
    return graph.n - (virtual_root_added ? 1u : 0u);
  }
};

// Whitespace-separated "src dst [value ...]" lines; '#' starts a comment
// line. Numeric third columns are folded into per-node attribute means
// (outgoing lines first, incoming as fallback). Throws InputError with the
// line number on malformed rows and on inputs with no nodes at all.
DirectedGraph load_edge_list(std::istream& in);
DirectedGraph load_edge_list_file(const std::string& path);

// Writes "src dst" lines in canonical ascending order plus a fixed comment
// header; output is byte-stable for a given graph.
void write_edge_list(std::ostream& out, const DirectedGraph& g);

// Removes isolated nodes, designates or synthesizes the root, removes nodes
// unreachable from it, and recompacts ids (labels preserved). With the
// virtual policy a synthetic node is added only when no existing in-degree-0
// node already reaches everything, so the operation is idempotent.
RootedGraph preprocess(const DirectedGraph& g, const RootSpec& spec);

// Drops the synthetic root (if any) and its edges, keeping labels and ids of
// the remaining nodes contiguous. Used to run baselines over the same node
// set the pricing pipeline prices.
DirectedGraph strip_virtual_root(const RootedGraph& rg);

// Uniform random simple digraph: m distinct non-loop edges over n nodes,
// labels 0..n-1. Identical (n, m, seed) yields identical edge sets on every
// platform. Requires 0 < m <= n*(n-1).
DirectedGraph generate_random_graph(std::uint32_t n, std::uint64_t m,
                                    std::uint64_t seed);

// Label rendering that knows about the synthetic root.
std::string label_string(const RootedGraph& rg, NodeId v);

}  // namespace gnp
