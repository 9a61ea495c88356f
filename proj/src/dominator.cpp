#include "gnp/dominator.hpp"

#include <algorithm>
#include <utility>

#include "gnp/errors.hpp"

namespace gnp {

namespace {

// Link-eval forest with path compression, labels tracking the minimum
// semidominator along compressed paths.
struct LinkEval {
  std::vector<NodeId> ancestor;
  std::vector<NodeId> best;                 // node with minimal semi on path
  const std::vector<std::uint32_t>& semi;
  std::vector<NodeId> path;

  explicit LinkEval(std::uint32_t n, const std::vector<std::uint32_t>& semi_ref)
      : ancestor(n, kNoNode), best(n), semi(semi_ref) {
    for (std::uint32_t v = 0; v < n; ++v) best[v] = v;
  }

  void link(NodeId parent, NodeId child) { ancestor[child] = parent; }

  NodeId eval(NodeId v) {
    if (ancestor[v] == kNoNode) return v;
    // Iterative compression: walk up, then fold best values back down.
    path.clear();
    NodeId u = v;
    while (ancestor[ancestor[u]] != kNoNode) {
      path.push_back(u);
      u = ancestor[u];
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const NodeId w = *it;
      const NodeId a = ancestor[w];
      if (semi[best[a]] < semi[best[w]]) best[w] = best[a];
      ancestor[w] = ancestor[a];
    }
    return best[v];
  }
};

}  // namespace

DominatorTree compute_dominator_tree(const RootedGraph& rg) {
  const DirectedGraph& g = rg.graph;
  const std::uint32_t n = g.n;

  // Preorder DFS over the canonical adjacency.
  std::vector<std::uint32_t> dfnum(n, 0xffffffffu);
  std::vector<NodeId> vertex;
  vertex.reserve(n);
  std::vector<NodeId> parent(n, kNoNode);
  {
    std::vector<std::pair<NodeId, std::uint64_t>> stack;
    dfnum[rg.root] = 0;
    vertex.push_back(rg.root);
    stack.emplace_back(rg.root, g.out_offsets[rg.root]);
    while (!stack.empty()) {
      auto& [u, it] = stack.back();
      if (it == g.out_offsets[u + 1]) {
        stack.pop_back();
        continue;
      }
      const NodeId v = g.out_targets[it++];
      if (dfnum[v] == 0xffffffffu) {
        dfnum[v] = static_cast<std::uint32_t>(vertex.size());
        vertex.push_back(v);
        parent[v] = u;
        stack.emplace_back(v, g.out_offsets[v]);
      }
    }
  }
  if (vertex.size() != n)
    throw PipelineError("rooted graph invariant violated: unreachable node");

  std::vector<std::uint32_t> semi(n);
  for (NodeId v = 0; v < n; ++v) semi[v] = dfnum[v];
  std::vector<NodeId> idom(n, kNoNode);
  std::vector<NodeId> bucket_head(n, kNoNode), bucket_next(n, kNoNode);
  LinkEval forest(n, semi);

  for (std::uint32_t d = n; d-- > 1;) {
    const NodeId w = vertex[d];
    for (const NodeId u : g.in(w)) {
      const NodeId x = forest.eval(u);
      if (semi[x] < semi[w]) semi[w] = semi[x];
    }
    const NodeId sdom_vertex = vertex[semi[w]];
    bucket_next[w] = bucket_head[sdom_vertex];
    bucket_head[sdom_vertex] = w;
    forest.link(parent[w], w);
    // Implicit idoms for everything whose semidominator is parent[w].
    const NodeId p = parent[w];
    for (NodeId v = bucket_head[p]; v != kNoNode;) {
      const NodeId next = bucket_next[v];
      const NodeId u = forest.eval(v);
      idom[v] = semi[u] < semi[v] ? u : p;
      v = next;
    }
    bucket_head[p] = kNoNode;
  }
  for (std::uint32_t d = 1; d < n; ++d) {
    const NodeId w = vertex[d];
    if (idom[w] != vertex[semi[w]]) idom[w] = idom[idom[w]];
  }
  idom[rg.root] = rg.root;

  DominatorTree t;
  t.root = rg.root;
  t.virtual_root = rg.virtual_root_added;
  t.idom = std::move(idom);
  t.labels = g.labels;
  t.child_offsets.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v)
    if (v != t.root) ++t.child_offsets[t.idom[v] + 1];
  for (std::uint32_t i = 0; i < n; ++i) t.child_offsets[i + 1] += t.child_offsets[i];
  t.child_list.resize(n > 0 ? n - 1 : 0);
  {
    std::vector<std::uint32_t> fill(t.child_offsets.begin(), t.child_offsets.end() - 1);
    for (NodeId v = 0; v < n; ++v)
      if (v != t.root) t.child_list[fill[t.idom[v]]++] = v;  // ascending by v
  }
  t.desc_count = descendant_counts(t);
  return t;
}

std::vector<std::uint32_t> descendant_counts(const DominatorTree& t) {
  const std::uint32_t n = t.n();
  std::vector<std::uint32_t> count(n, 0);
  // Bottom-up over a preorder of the tree.
  std::vector<NodeId> order;
  order.reserve(n);
  order.push_back(t.root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const NodeId c : t.children(order[i])) order.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    if (v != t.root) count[t.idom[v]] += count[v] + 1;
  }
  return count;
}

std::vector<NodeId> dominated_set_brute_force(const RootedGraph& rg, NodeId v) {
  if (v == rg.root) throw InputError("deleting the root is undefined");
  const DirectedGraph& g = rg.graph;
  std::vector<char> seen(g.n, 0);
  std::vector<NodeId> stack{rg.root};
  seen[rg.root] = 1;
  seen[v] = 1;  // block v
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const NodeId w : g.out(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<NodeId> dominated;
  for (NodeId u = 0; u < g.n; ++u)
    if (!seen[u]) dominated.push_back(u);
  return dominated;
}

RootedGraph tree_as_rooted_graph(const DominatorTree& t) {
  const std::uint32_t n = t.n();
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (NodeId v = 0; v < n; ++v)
    if (v != t.root) edges.emplace_back(t.idom[v], v);
  RootedGraph rg;
  rg.graph = make_graph(t.labels, std::move(edges));
  rg.root = t.root;
  rg.virtual_root_added = t.virtual_root;
  return rg;
}

}  // namespace gnp
