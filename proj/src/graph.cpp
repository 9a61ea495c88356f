#include "gnp/graph.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "gnp/errors.hpp"
#include "gnp/numfmt.hpp"
#include "gnp/rng.hpp"

namespace gnp {

std::pair<NodeId, NodeId> DirectedGraph::edge(std::uint32_t edge_id) const {
  // Edge ids follow the out-CSR order, so the source row is found by offset.
  auto it = std::upper_bound(out_offsets.begin(), out_offsets.end(), edge_id);
  const NodeId src = static_cast<NodeId>(it - out_offsets.begin() - 1);
  return {src, out_targets[edge_id]};
}

DirectedGraph make_graph(std::vector<std::uint64_t> labels,
                         std::vector<std::pair<NodeId, NodeId>> edges,
                         std::vector<double> node_value) {
  DirectedGraph g;
  g.n = static_cast<std::uint32_t>(labels.size());
  g.labels = std::move(labels);
  g.node_value = std::move(node_value);
  if (g.n == 0) throw InputError("graph has no nodes");

  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.m = edges.size();

  g.out_offsets.assign(g.n + 1, 0);
  g.in_offsets.assign(g.n + 1, 0);
  for (const auto& [u, v] : edges) {
    assert(u < g.n && v < g.n);
    ++g.out_offsets[u + 1];
    ++g.in_offsets[v + 1];
  }
  for (std::uint32_t i = 0; i < g.n; ++i) {
    g.out_offsets[i + 1] += g.out_offsets[i];
    g.in_offsets[i + 1] += g.in_offsets[i];
  }
  g.out_targets.resize(g.m);
  g.in_sources.resize(g.m);
  g.in_edge_ids.resize(g.m);
  std::vector<std::uint64_t> in_fill(g.in_offsets.begin(), g.in_offsets.end() - 1);
  for (std::uint32_t k = 0; k < g.m; ++k) {
    const auto [u, v] = edges[k];
    g.out_targets[k] = v;  // edges already (src,dst)-ascending
    const std::uint64_t pos = in_fill[v]++;
    g.in_sources[pos] = u;
    g.in_edge_ids[pos] = k;
  }
  return g;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

struct AttrAccum {
  double sum = 0;
  std::uint64_t count = 0;
};

std::uint64_t parse_label(const char*& p, const char* end, std::uint64_t line_no) {
  std::uint64_t value = 0;
  auto res = std::from_chars(p, end, value);
  if (res.ec != std::errc{} || (res.ptr != end && !is_space(*res.ptr))) {
    throw InputError("edge list parse error at line " + format_u64(line_no) +
                     ": expected an unsigned integer node id");
  }
  p = res.ptr;
  return value;
}

}  // namespace

DirectedGraph load_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_edges;
  std::unordered_set<std::uint64_t> label_set;
  std::unordered_map<std::uint64_t, AttrAccum> attr_out, attr_in;
  bool any_attr = false;

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end && is_space(*p)) ++p;
    if (p == end || *p == '#') continue;

    const std::uint64_t src = parse_label(p, end, line_no);
    while (p < end && is_space(*p)) ++p;
    if (p == end)
      throw InputError("edge list parse error at line " + format_u64(line_no) +
                       ": missing destination node id");
    const std::uint64_t dst = parse_label(p, end, line_no);
    while (p < end && is_space(*p)) ++p;

    label_set.insert(src);
    label_set.insert(dst);
    if (src != dst) raw_edges.emplace_back(src, dst);

    if (p < end) {
      double value = 0;
      auto res = std::from_chars(p, end, value);
      if (res.ec == std::errc{} && (res.ptr == end || is_space(*res.ptr))) {
        any_attr = true;
        auto& a = attr_out[src];
        a.sum += value;
        ++a.count;
        auto& b = attr_in[dst];
        b.sum += value;
        ++b.count;
      }
      // Non-numeric trailing columns are ignored.
    }
  }
  if (label_set.empty()) throw InputError("edge list is empty");

  std::vector<std::uint64_t> labels(label_set.begin(), label_set.end());
  std::sort(labels.begin(), labels.end());
  std::unordered_map<std::uint64_t, NodeId> id_of;
  id_of.reserve(labels.size());
  for (NodeId i = 0; i < labels.size(); ++i) id_of.emplace(labels[i], i);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [s, d] : raw_edges)
    edges.emplace_back(id_of.at(s), id_of.at(d));

  std::vector<double> node_value;
  if (any_attr) {
    node_value.assign(labels.size(), std::numeric_limits<double>::quiet_NaN());
    for (NodeId i = 0; i < labels.size(); ++i) {
      if (auto it = attr_out.find(labels[i]); it != attr_out.end() && it->second.count > 0) {
        node_value[i] = it->second.sum / static_cast<double>(it->second.count);
      } else if (auto jt = attr_in.find(labels[i]); jt != attr_in.end() && jt->second.count > 0) {
        node_value[i] = jt->second.sum / static_cast<double>(jt->second.count);
      }
    }
  }
  return make_graph(std::move(labels), std::move(edges), std::move(node_value));
}

DirectedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  out << "# directed edge list: nodes=" << format_u64(g.n)
      << " edges=" << format_u64(g.m) << "\n";
  for (NodeId u = 0; u < g.n; ++u) {
    for (const NodeId v : g.out(u)) {
      out << format_u64(g.labels[u]) << ' ' << format_u64(g.labels[v]) << '\n';
    }
  }
}

namespace {

// Forward reachability over a kept-subset view of g.
std::vector<char> reach_from(const DirectedGraph& g, std::span<const NodeId> seeds,
                             const std::vector<char>& kept) {
  std::vector<char> seen(g.n, 0);
  std::vector<NodeId> stack(seeds.begin(), seeds.end());
  for (const NodeId s : stack) seen[s] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const NodeId v : g.out(u)) {
      if (kept[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Kosaraju over the kept subset; returns component id per node, ids assigned
// in a deterministic order.
std::vector<std::uint32_t> scc_ids(const DirectedGraph& g,
                                   const std::vector<char>& kept,
                                   std::uint32_t& comp_count) {
  const std::uint32_t n = g.n;
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<NodeId, std::uint64_t>> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (!kept[s] || seen[s]) continue;
    seen[s] = 1;
    stack.emplace_back(s, g.out_offsets[s]);
    while (!stack.empty()) {
      auto& [u, it] = stack.back();
      if (it == g.out_offsets[u + 1]) {
        order.push_back(u);
        stack.pop_back();
        continue;
      }
      const NodeId v = g.out_targets[it++];
      if (kept[v] && !seen[v]) {
        seen[v] = 1;
        stack.emplace_back(v, g.out_offsets[v]);
      }
    }
  }
  std::vector<std::uint32_t> comp(n, 0);
  std::vector<char> done(n, 0);
  comp_count = 0;
  std::vector<NodeId> dfs;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId s = *it;
    if (done[s]) continue;
    const std::uint32_t c = comp_count++;
    done[s] = 1;
    dfs.assign(1, s);
    while (!dfs.empty()) {
      const NodeId u = dfs.back();
      dfs.pop_back();
      comp[u] = c;
      for (const NodeId v : g.in(u)) {
        if (kept[v] && !done[v]) {
          done[v] = 1;
          dfs.push_back(v);
        }
      }
    }
  }
  return comp;
}

}  // namespace

RootedGraph preprocess(const DirectedGraph& g, const RootSpec& spec) {
  // Pass 1: drop isolated nodes.
  std::vector<char> kept(g.n, 0);
  std::uint32_t kept_count = 0;
  for (NodeId v = 0; v < g.n; ++v) {
    if (g.out_degree(v) + g.in_degree(v) > 0) {
      kept[v] = 1;
      ++kept_count;
    }
  }
  if (kept_count == 0) throw InputError("graph is empty after removing isolated nodes");

  bool add_virtual = false;
  std::vector<NodeId> virtual_targets;
  NodeId root_old = kNoNode;

  if (spec.policy == RootPolicy::Designated) {
    for (NodeId v = 0; v < g.n; ++v) {
      if (kept[v] && g.labels[v] == spec.designated_label) {
        root_old = v;
        break;
      }
    }
    if (root_old == kNoNode)
      throw InputError("designated root " + format_u64(spec.designated_label) +
                       " is not present in the preprocessed graph");
    const auto seen = reach_from(g, std::span(&root_old, 1), kept);
    for (NodeId v = 0; v < g.n; ++v)
      if (kept[v] && !seen[v]) {
        kept[v] = 0;
        --kept_count;
      }
  } else {
    std::vector<NodeId> sources;
    for (NodeId v = 0; v < g.n; ++v) {
      if (!kept[v]) continue;
      std::uint64_t indeg = 0;
      for (const NodeId u : g.in(v))
        if (kept[u]) ++indeg;
      if (indeg == 0) sources.push_back(v);
    }
    if (sources.size() == 1) {
      const auto seen = reach_from(g, std::span(sources.data(), 1), kept);
      std::uint32_t covered = 0;
      for (NodeId v = 0; v < g.n; ++v)
        if (kept[v] && seen[v]) ++covered;
      if (covered == kept_count) root_old = sources[0];
    }
    if (root_old == kNoNode) {
      // Wire a synthetic root to one representative of every source
      // component of the condensation; that reaches everything.
      std::uint32_t comp_count = 0;
      const auto comp = scc_ids(g, kept, comp_count);
      std::vector<char> has_external_in(comp_count, 0);
      for (NodeId v = 0; v < g.n; ++v) {
        if (!kept[v]) continue;
        for (const NodeId u : g.in(v)) {
          if (kept[u] && comp[u] != comp[v]) has_external_in[comp[v]] = 1;
        }
      }
      std::vector<NodeId> rep(comp_count, kNoNode);
      for (NodeId v = 0; v < g.n; ++v) {
        if (kept[v] && rep[comp[v]] == kNoNode) rep[comp[v]] = v;  // smallest id
      }
      for (std::uint32_t c = 0; c < comp_count; ++c)
        if (!has_external_in[c]) virtual_targets.push_back(rep[c]);
      std::sort(virtual_targets.begin(), virtual_targets.end());
      add_virtual = true;
    }
  }

  // Pass 2: compact the surviving nodes (ids stay label-ordered).
  const std::uint32_t n_new = kept_count + (add_virtual ? 1 : 0);
  std::vector<NodeId> new_id(g.n, kNoNode);
  std::vector<std::uint64_t> labels;
  labels.reserve(n_new);
  for (NodeId v = 0; v < g.n; ++v) {
    if (kept[v]) {
      if (g.labels[v] == kSyntheticRootLabel && add_virtual)
        throw InputError("input uses the reserved synthetic root label");
      new_id[v] = static_cast<NodeId>(labels.size());
      labels.push_back(g.labels[v]);
    }
  }
  NodeId root_new;
  if (add_virtual) {
    root_new = static_cast<NodeId>(labels.size());
    labels.push_back(kSyntheticRootLabel);
  } else {
    root_new = new_id[root_old];
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.m + virtual_targets.size());
  for (NodeId u = 0; u < g.n; ++u) {
    if (!kept[u]) continue;
    for (const NodeId v : g.out(u))
      if (kept[v]) edges.emplace_back(new_id[u], new_id[v]);
  }
  for (const NodeId t : virtual_targets) edges.emplace_back(root_new, new_id[t]);

  std::vector<double> node_value;
  if (!g.node_value.empty()) {
    node_value.assign(n_new, std::numeric_limits<double>::quiet_NaN());
    for (NodeId v = 0; v < g.n; ++v)
      if (kept[v]) node_value[new_id[v]] = g.node_value[v];
  }

  RootedGraph rg;
  rg.graph = make_graph(std::move(labels), std::move(edges), std::move(node_value));
  rg.root = root_new;
  rg.virtual_root_added = add_virtual;
  return rg;
}

DirectedGraph strip_virtual_root(const RootedGraph& rg) {
  if (!rg.virtual_root_added) return rg.graph;
  const DirectedGraph& g = rg.graph;
  const NodeId r = rg.root;
  std::vector<std::uint64_t> labels;
  labels.reserve(g.n - 1);
  for (NodeId v = 0; v < g.n; ++v)
    if (v != r) labels.push_back(g.labels[v]);
  // The synthetic root is the last id, so real ids are unchanged.
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.m);
  for (NodeId u = 0; u < g.n; ++u) {
    if (u == r) continue;
    for (const NodeId v : g.out(u))
      if (v != r) edges.emplace_back(u, v);
  }
  std::vector<double> node_value;
  if (!g.node_value.empty())
    node_value.assign(g.node_value.begin(), g.node_value.begin() + (g.n - 1));
  return make_graph(std::move(labels), std::move(edges), std::move(node_value));
}

DirectedGraph generate_random_graph(std::uint32_t n, std::uint64_t m,
                                    std::uint64_t seed) {
  if (n == 0) throw InputError("node count must be positive");
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1);
  if (m == 0 || m > max_edges)
    throw InputError("edge count must satisfy 0 < m <= n*(n-1)");

  // Floyd's subset sampling over the n*(n-1) non-loop edge slots: uniform,
  // rejection-free, and order-independent of density.
  SplitMix64 rng(stream_seed(seed, 0x67656e ^ n));
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::uint64_t j = max_edges - m; j < max_edges; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(chosen.size());
  for (const std::uint64_t k : chosen) {
    const NodeId src = static_cast<NodeId>(k / (n - 1));
    const std::uint64_t rem = k % (n - 1);
    const NodeId dst = static_cast<NodeId>(rem + (rem >= src ? 1 : 0));
    edges.emplace_back(src, dst);
  }
  std::vector<std::uint64_t> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = i;
  return make_graph(std::move(labels), std::move(edges));
}

std::string label_string(const RootedGraph& rg, NodeId v) {
  if (rg.is_virtual(v)) return "__root__";
  return format_u64(rg.graph.labels[v]);
}

}  // namespace gnp
