#pragma once

// Shared fixtures and brute-force oracles for the test binaries. Everything
// here favors obviousness over speed; the oracles must stay independent of
// the library's algorithmic shortcuts.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/graph.hpp"
#include "gnp/profiles.hpp"
#include "gnp/rng.hpp"

namespace testutil {

using namespace gnp;

// Builds a graph the same way the CLI does: through the text loader.
inline DirectedGraph graph_from_edges(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges) {
  std::ostringstream text;
  for (const auto& [a, b] : edges) text << a << ' ' << b << '\n';
  std::istringstream in(text.str());
  return load_edge_list(in);
}

inline RootedGraph random_rooted(std::uint32_t n, std::uint64_t m,
                                 std::uint64_t seed) {
  return preprocess(generate_random_graph(n, m, seed),
                    RootSpec::virtual_super_root());
}

// Uniform random DAG: m distinct edges i->j with i < j, ids topological.
inline DirectedGraph random_dag(std::uint32_t n, std::uint64_t m,
                                std::uint64_t seed) {
  const std::uint64_t slots = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  m = std::min(m, slots);
  SplitMix64 rng(stream_seed(seed, 0xdadull));
  std::set<std::uint64_t> chosen;
  for (std::uint64_t k = slots - m; k < slots; ++k) {
    const std::uint64_t t = rng.below(k + 1);
    if (!chosen.insert(t).second) chosen.insert(k);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::uint64_t> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = i;
  for (const std::uint64_t idx : chosen) {
    // Row i covers pairs (i, i+1..n-1).
    std::uint64_t rest = idx;
    std::uint32_t i = 0;
    while (rest >= n - 1 - i) {
      rest -= n - 1 - i;
      ++i;
    }
    edges.emplace_back(i, static_cast<NodeId>(i + 1 + rest));
  }
  return make_graph(std::move(labels), std::move(edges));
}

// Random tree on n nodes: parent of v drawn from [0, v).
inline DirectedGraph random_tree(std::uint32_t n, std::uint64_t seed) {
  SplitMix64 rng(stream_seed(seed, 0x7e3ull));
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::uint64_t> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = i;
  for (std::uint32_t v = 1; v < n; ++v)
    edges.emplace_back(static_cast<NodeId>(rng.below(v)), v);
  return make_graph(std::move(labels), std::move(edges));
}

inline std::vector<NodeId> tree_descendants(const DominatorTree& t, NodeId v) {
  std::vector<NodeId> out, stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const NodeId c : t.children(u)) {
      out.push_back(c);
      stack.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Canonical (src, dst)-ascending edge ids, matching the profile universe.
inline std::map<std::pair<NodeId, NodeId>, std::uint32_t> edge_ids(
    const DirectedGraph& g) {
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> ids;
  std::uint32_t next = 0;
  for (NodeId u = 0; u < g.n; ++u)
    for (const NodeId w : g.out(u)) ids[{u, w}] = next++;
  return ids;
}

// Profile oracle by explicit path enumeration. Only safe on DAGs (the
// rooted graph must have no cycles); exponential in the worst case.
struct EnumeratedProfiles {
  std::vector<std::set<std::uint32_t>> incoming, outgoing;
};

inline EnumeratedProfiles enumerate_profiles(const RootedGraph& rg) {
  const DirectedGraph& g = rg.graph;
  EnumeratedProfiles out;
  out.incoming.resize(g.n);
  out.outgoing.resize(g.n);

  std::uint32_t next_id = 0;
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> ids;
  for (NodeId u = 0; u < g.n; ++u)
    for (const NodeId w : g.out(u)) ids[{u, w}] = next_id++;

  std::vector<std::uint32_t> path;
  std::function<void(NodeId)> down = [&](NodeId u) {
    for (const std::uint32_t e : path) out.incoming[u].insert(e);
    for (const NodeId w : g.out(u)) {
      path.push_back(ids[{u, w}]);
      down(w);
      path.pop_back();
    }
  };
  down(rg.root);

  for (NodeId v = 0; v < g.n; ++v) {
    std::function<void(NodeId)> from = [&](NodeId u) {
      for (const NodeId w : g.out(u)) {
        out.outgoing[v].insert(ids[{u, w}]);
        from(w);
      }
    };
    from(v);
  }
  return out;
}

// Shortest-path criticality oracle: for every target j, intersect the node
// sets of all shortest root->j paths (bitmask per path, n <= 64), then count
// for each v the targets j != v whose every shortest path contains v.
inline std::vector<double> criticality_sp_oracle(const RootedGraph& rg) {
  const DirectedGraph& g = rg.graph;
  const std::uint32_t n = g.n;
  std::vector<std::uint32_t> dist(n, 0xffffffffu);
  std::vector<NodeId> queue{rg.root};
  dist[rg.root] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const NodeId u = queue[h];
    for (const NodeId w : g.out(u))
      if (dist[w] == 0xffffffffu) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }

  std::vector<std::uint64_t> required(n, 0);
  for (NodeId j = 0; j < n; ++j) {
    std::uint64_t common = ~0ull;
    // Walk backwards from j along shortest-path predecessors.
    std::function<void(NodeId, std::uint64_t)> up = [&](NodeId u,
                                                        std::uint64_t mask) {
      mask |= 1ull << u;
      if (u == rg.root) {
        common &= mask;
        return;
      }
      for (const NodeId p : g.in(u))
        if (dist[p] + 1 == dist[u]) up(p, mask);
    };
    up(j, 0);
    required[j] = common;
  }

  std::vector<double> c(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    std::uint64_t count = 0;
    for (NodeId j = 0; j < n; ++j)
      if (j != v && (required[j] >> v) & 1) ++count;
    c[v] = static_cast<double>(count) / static_cast<double>(n - 1);
  }
  return c;
}

// Ordered reachable pairs of the full graph, straight BFS per node.
inline std::uint64_t reachable_pairs_brute(const DirectedGraph& g,
                                           const std::vector<NodeId>& members) {
  std::vector<char> in_set(g.n, 0);
  for (const NodeId v : members) in_set[v] = 1;
  std::uint64_t pairs = 0;
  for (const NodeId s : members) {
    std::vector<char> seen(g.n, 0);
    std::vector<NodeId> queue{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeId u = queue[h];
      for (const NodeId w : g.out(u)) {
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
          ++pairs;
        }
      }
    }
  }
  return pairs;
}

// Dense damped power iteration, run far past the library's tolerance.
inline std::vector<double> eigenvector_dense_oracle(const DirectedGraph& g,
                                                    double damping = 0.85) {
  const std::uint32_t n = g.n;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, (1.0 - damping) / n));
  for (NodeId u = 0; u < n; ++u)
    for (const NodeId w : g.out(u)) m[w][u] += damping;
  std::vector<double> x(n, 1.0 / n), y(n);
  for (int it = 0; it < 100000; ++it) {
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId u = 0; u < n; ++u) acc += m[v][u] * x[u];
      y[v] = acc;
      total += acc;
    }
    double diff = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      y[v] /= total;
      diff += std::abs(y[v] - x[v]);
    }
    x.swap(y);
    if (diff < 1e-14) break;
  }
  return x;
}

inline double jaccard(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::uint32_t> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  const std::size_t uni = a.size() + b.size() - inter.size();
  return uni == 0 ? 1.0 : static_cast<double>(inter.size()) / uni;
}

inline double l1_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace testutil
