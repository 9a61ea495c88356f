#include "gnp/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>

#include "gnp/errors.hpp"
#include "gnp/parallel.hpp"
#include "gnp/profiles.hpp"
#include "gnp/similarity.hpp"
#include "gnp/sketch.hpp"

namespace gnp {

std::vector<double> criticality_dominator(const DominatorTree& t) {
  const std::uint32_t n = t.n();
  if (n < 2) throw InputError("criticality needs at least two nodes");
  std::vector<double> c(n);
  const double denom = static_cast<double>(n - 1);
  for (NodeId v = 0; v < n; ++v)
    c[v] = static_cast<double>(t.desc_count[v]) / denom;
  return c;
}

namespace {

using u128 = unsigned __int128;

struct CountingBfs {
  std::vector<std::uint32_t> dist;
  std::vector<u128> sigma;
  std::vector<char> saturated;

  void run(const DirectedGraph& g, NodeId source, std::vector<NodeId>& queue) {
    dist.assign(g.n, 0xffffffffu);
    sigma.assign(g.n, 0);
    saturated.assign(g.n, 0);
    queue.clear();
    dist[source] = 0;
    sigma[source] = 1;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (const NodeId w : g.out(u)) {
        if (dist[w] == 0xffffffffu) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[u] + 1) {
          const u128 before = sigma[w];
          sigma[w] = before + sigma[u];
          if (sigma[w] < before) {  // wrapped: saturate
            sigma[w] = ~u128{0};
            saturated[w] = 1;
          }
          saturated[w] |= saturated[u];
        }
      }
    }
  }
};

// Preorder in/out intervals for ancestor queries on a dominator tree.
struct AncestorIntervals {
  std::vector<std::uint32_t> tin, tout;

  explicit AncestorIntervals(const DominatorTree& t) {
    const std::uint32_t n = t.n();
    tin.assign(n, 0);
    tout.assign(n, 0);
    std::uint32_t clock = 0;
    std::vector<std::pair<NodeId, std::uint32_t>> stack{{t.root, 0}};
    while (!stack.empty()) {
      auto& [v, child_idx] = stack.back();
      const auto kids = t.children(v);
      if (child_idx == 0) tin[v] = clock++;
      if (child_idx == kids.size()) {
        tout[v] = clock;
        stack.pop_back();
        continue;
      }
      stack.emplace_back(kids[child_idx++], 0);
    }
  }

  bool is_ancestor(NodeId a, NodeId b) const {
    return tin[a] <= tin[b] && tin[b] < tout[a];
  }
};

}  // namespace

std::vector<double> criticality_shortest_path(const RootedGraph& rg,
                                              int threads) {
  const DirectedGraph& g = rg.graph;
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("criticality needs at least two nodes");

  CountingBfs from_root;
  {
    std::vector<NodeId> queue;
    from_root.run(g, rg.root, queue);
  }

  // Lazily built exact fallback for saturated counters: v is on every
  // shortest root->j path iff v dominates j in the shortest-path DAG.
  std::once_flag dag_once;
  std::unique_ptr<AncestorIntervals> dag_intervals;
  auto ensure_dag = [&]() {
    std::call_once(dag_once, [&] {
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (NodeId u = 0; u < n; ++u) {
        for (const NodeId w : g.out(u))
          if (from_root.dist[u] + 1 == from_root.dist[w]) edges.emplace_back(u, w);
      }
      RootedGraph dag;
      dag.graph = make_graph(g.labels, std::move(edges));
      dag.root = rg.root;
      dag.virtual_root_added = rg.virtual_root_added;
      dag_intervals = std::make_unique<AncestorIntervals>(compute_dominator_tree(dag));
    });
  };

  std::vector<double> c(n, 0.0);
  const double denom = static_cast<double>(n - 1);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    CountingBfs from_v;
    std::vector<NodeId> queue;
    for (std::size_t vi = begin; vi < end; ++vi) {
      const NodeId v = static_cast<NodeId>(vi);
      if (v == rg.root) {
        // Every path starts at the root.
        c[v] = 1.0;
        continue;
      }
      from_v.run(g, v, queue);
      std::uint64_t required = 0;
      for (NodeId j = 0; j < n; ++j) {
        if (j == v) continue;
        if (from_v.dist[j] == 0xffffffffu) continue;
        if (from_root.dist[v] + from_v.dist[j] != from_root.dist[j]) continue;
        if (from_root.saturated[v] || from_v.saturated[j] ||
            from_root.saturated[j]) {
          ensure_dag();
          required += dag_intervals->is_ancestor(v, j);
          continue;
        }
        u128 through = 0;
        if (__builtin_mul_overflow(from_root.sigma[v], from_v.sigma[j], &through)) {
          ensure_dag();
          required += dag_intervals->is_ancestor(v, j);
          continue;
        }
        required += (through == from_root.sigma[j]);
      }
      c[v] = static_cast<double>(required) / denom;
    }
  });
  return c;
}

ScoreTable substitutability(std::span<const double> criticality,
                            std::span<const double> mean_similarity) {
  if (criticality.size() != mean_similarity.size())
    throw InputError("criticality and similarity tables differ in size");
  ScoreTable t;
  t.criticality.assign(criticality.begin(), criticality.end());
  t.mean_similarity.assign(mean_similarity.begin(), mean_similarity.end());
  t.substitutability.resize(criticality.size());
  for (std::size_t i = 0; i < criticality.size(); ++i)
    t.substitutability[i] = criticality[i] * mean_similarity[i];
  return t;
}

std::vector<double> derive_prices(std::span<const double> substitutability,
                                  double epsilon) {
  const std::size_t n = substitutability.size();
  if (n < 2) throw InputError("pricing needs at least two nodes");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InputError("epsilon must lie strictly between 0 and 1");

  std::vector<double> w(n, 0.0);
  double positive_sum = 0.0;
  std::size_t positive_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = substitutability[i];
    if (b > 0.0) {
      const double clamped = std::min(std::max(b, epsilon), 1.0 - epsilon);
      w[i] = -std::log(clamped);
      positive_sum += w[i];
      ++positive_count;
    }
  }
  const double fallback =
      positive_count > 0 ? positive_sum / static_cast<double>(positive_count) : 1.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!(substitutability[i] > 0.0)) w[i] = fallback;

  double total = 0.0;
  for (const double x : w) total += x;
  std::vector<double> prices(n);
  for (std::size_t i = 0; i < n; ++i) prices[i] = w[i] / total;
  return prices;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PricingReport price_graph(const DirectedGraph& g, const PricingConfig& cfg) {
  PricingReport report;
  report.config = cfg;
  report.input_n = g.n;
  report.input_m = g.m;

  const auto t_start = std::chrono::steady_clock::now();
  auto t0 = t_start;

  const RootedGraph rg = preprocess(g, cfg.root);
  report.timings.preprocess_ms = ms_since(t0);
  report.analyzed_n = rg.graph.n;
  report.analyzed_m = rg.graph.m;
  report.virtual_root = rg.virtual_root_added;

  t0 = std::chrono::steady_clock::now();
  const DominatorTree tree = compute_dominator_tree(rg);
  report.timings.dominators_ms = ms_since(t0);

  std::vector<double> mean_sim;
  if (cfg.similarity == SimilarityMode::Exact) {
    t0 = std::chrono::steady_clock::now();
    const ProfileSet profiles = collect_profiles(tree_as_rooted_graph(tree), cfg.threads);
    report.timings.profiles_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    mean_sim = exact_similarity_scores(profiles, cfg.threads);
    report.timings.similarity_ms = ms_since(t0);
  } else {
    t0 = std::chrono::steady_clock::now();
    const LshIndex index =
        LshIndex::build(tree, LshParams{cfg.num_perm, cfg.threshold, cfg.seed});
    report.timings.profiles_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    mean_sim = approx_similarity_scores(tree, index);
    report.timings.similarity_ms = ms_since(t0);
  }

  t0 = std::chrono::steady_clock::now();
  std::vector<double> crit;
  if (cfg.criticality == CriticalityMode::Dominator) {
    crit = criticality_dominator(tree);
  } else {
    crit = criticality_shortest_path(rg, cfg.threads);
  }
  report.timings.criticality_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const ScoreTable full = substitutability(crit, mean_sim);
  report.timings.scoring_ms = ms_since(t0);

  // Price the real nodes only; the synthetic root never appears in output.
  t0 = std::chrono::steady_clock::now();
  const std::uint32_t priced = rg.real_node_count();
  report.labels.reserve(priced);
  report.scores.criticality.reserve(priced);
  report.scores.mean_similarity.reserve(priced);
  report.scores.substitutability.reserve(priced);
  for (NodeId v = 0; v < rg.graph.n; ++v) {
    if (rg.is_virtual(v)) continue;
    report.labels.push_back(rg.graph.labels[v]);
    report.scores.criticality.push_back(full.criticality[v]);
    report.scores.mean_similarity.push_back(full.mean_similarity[v]);
    report.scores.substitutability.push_back(full.substitutability[v]);
  }
  report.prices = derive_prices(report.scores.substitutability, cfg.epsilon);
  report.timings.pricing_ms = ms_since(t0);
  report.timings.total_ms = ms_since(t_start);
  return report;
}

const char* to_string(CriticalityMode m) {
  return m == CriticalityMode::Dominator ? "dominator" : "shortest_path";
}

const char* to_string(SimilarityMode m) {
  return m == SimilarityMode::Exact ? "exact" : "minhash_lsh";
}

}  // namespace gnp
