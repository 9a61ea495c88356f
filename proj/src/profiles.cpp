#include "gnp/profiles.hpp"

#include <algorithm>

#include "gnp/parallel.hpp"

namespace gnp {

ProfileSet collect_profiles(const RootedGraph& rg, int threads) {
  const DirectedGraph& g = rg.graph;
  const std::uint32_t n = g.n;

  ProfileSet p;
  p.edges.resize(g.m);
  for (NodeId u = 0; u < n; ++u) {
    for (std::uint64_t k = g.out_offsets[u]; k < g.out_offsets[u + 1]; ++k)
      p.edges[k] = {u, g.out_targets[k]};
  }
  p.incoming.resize(n);
  p.outgoing.resize(n);

  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<NodeId> visited;
    std::vector<std::uint32_t> mark(n, 0xffffffffu);
    std::vector<NodeId> stack;

    for (std::size_t vi = begin; vi < end; ++vi) {
      const NodeId v = static_cast<NodeId>(vi);

      // Forward sweep: sources reachable from v, then their out-edge ranges.
      // Ranges of ascending sources concatenate to an ascending id list.
      visited.clear();
      stack.assign(1, v);
      mark[v] = v;
      visited.push_back(v);
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const NodeId w : g.out(u)) {
          if (mark[w] != v) {
            mark[w] = v;
            visited.push_back(w);
            stack.push_back(w);
          }
        }
      }
      std::sort(visited.begin(), visited.end());
      auto& out_ids = p.outgoing[vi];
      std::uint64_t total = 0;
      for (const NodeId u : visited) total += g.out_degree(u);
      out_ids.reserve(total);
      for (const NodeId u : visited) {
        for (std::uint64_t k = g.out_offsets[u]; k < g.out_offsets[u + 1]; ++k)
          out_ids.push_back(static_cast<std::uint32_t>(k));
      }

      // Backward sweep: targets that reach v, then their in-edge ids. In a
      // rooted graph every edge source is reachable from the root, so these
      // are exactly the edges on root->v walks.
      visited.clear();
      stack.assign(1, v);
      // Distinct epoch for the backward sweep of the same v.
      const std::uint32_t epoch = n + v;
      mark[v] = epoch;
      visited.push_back(v);
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const NodeId w : g.in(u)) {
          if (mark[w] != epoch) {
            mark[w] = epoch;
            visited.push_back(w);
            stack.push_back(w);
          }
        }
      }
      auto& in_ids = p.incoming[vi];
      total = 0;
      for (const NodeId w : visited) total += g.in_degree(w);
      in_ids.reserve(total);
      for (const NodeId w : visited) {
        for (std::uint64_t k = g.in_offsets[w]; k < g.in_offsets[w + 1]; ++k)
          in_ids.push_back(g.in_edge_ids[k]);
      }
      std::sort(in_ids.begin(), in_ids.end());
    }
  });
  return p;
}

}  // namespace gnp
