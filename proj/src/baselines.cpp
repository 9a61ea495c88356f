#include "gnp/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "gnp/errors.hpp"
#include "gnp/numfmt.hpp"
#include "gnp/parallel.hpp"
#include "gnp/rng.hpp"

namespace gnp {

ReachablePairsEvaluator::ReachablePairsEvaluator(const DirectedGraph& g)
    : g_(&g), words_((g.n + 63) / 64) {
  reach_.assign(static_cast<std::size_t>(g.n) * words_, 0);
  in_mask_.assign(words_, 0);
  member_.assign(g.n, 0);
  members_.reserve(g.n);
}

void ReachablePairsEvaluator::reset() {
  member_.assign(g_->n, 0);
  members_.clear();
  pairs_ = 0;
}

std::uint64_t ReachablePairsEvaluator::add(NodeId x) {
  std::uint64_t* rx = reach_.data() + static_cast<std::size_t>(x) * words_;
  std::fill(rx, rx + words_, 0);
  rx[x >> 6] |= 1ull << (x & 63);
  // Everything reachable from x goes through one of its direct out-edges,
  // so the old rows of its member successors already close the set.
  for (const NodeId w : g_->out(x)) {
    if (!member_[w]) continue;
    const std::uint64_t* rw = reach_.data() + static_cast<std::size_t>(w) * words_;
    for (std::size_t i = 0; i < words_; ++i) rx[i] |= rw[i];
  }
  std::uint64_t delta = 0;
  for (std::size_t i = 0; i < words_; ++i) delta += std::popcount(rx[i]);
  --delta;  // x itself

  std::fill(in_mask_.begin(), in_mask_.end(), 0);
  bool any_in = false;
  for (const NodeId u : g_->in(x)) {
    if (!member_[u]) continue;
    in_mask_[u >> 6] |= 1ull << (u & 63);
    any_in = true;
  }
  if (any_in) {
    // A new path from y must enter x through a member in-neighbor y could
    // already reach, so the old rows decide who gains x's row.
    for (const NodeId y : members_) {
      std::uint64_t* ry = reach_.data() + static_cast<std::size_t>(y) * words_;
      std::uint64_t hit = 0;
      for (std::size_t i = 0; i < words_; ++i) hit |= ry[i] & in_mask_[i];
      if (!hit) continue;
      for (std::size_t i = 0; i < words_; ++i) {
        delta += std::popcount(rx[i] & ~ry[i]);
        ry[i] |= rx[i];
      }
    }
  }
  member_[x] = 1;
  members_.push_back(x);
  pairs_ += delta;
  return delta;
}

std::vector<double> monte_carlo_shapley_raw(const DirectedGraph& g,
                                            int num_samples,
                                            std::uint64_t seed,
                                            int threads) {
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("shapley needs at least two nodes");
  if (num_samples < 1) throw InputError("sample count must be positive");

  const std::uint64_t samples = static_cast<std::uint64_t>(num_samples);
  const std::uint64_t chunk_count = (samples + 63) / 64;
  // Integer marginal sums commute, so relaxed atomic accumulation gives the
  // same totals for any thread count and schedule.
  std::vector<std::atomic<std::uint64_t>> sums(n);
  parallel_chunks(chunk_count, threads, [&](std::size_t begin, std::size_t end) {
    ReachablePairsEvaluator eval(g);
    std::vector<NodeId> perm(n);
    std::vector<std::uint64_t> local(n, 0);
    for (std::size_t c = begin; c < end; ++c) {
      const std::uint64_t lo = static_cast<std::uint64_t>(c) * 64;
      const std::uint64_t hi = std::min(lo + 64, samples);
      for (std::uint64_t k = lo; k < hi; ++k) {
        SplitMix64 rng(stream_seed(seed, k));
        std::iota(perm.begin(), perm.end(), NodeId{0});
        for (std::uint32_t i = n - 1; i > 0; --i) {
          const std::uint64_t j = rng.below(i + 1);
          std::swap(perm[i], perm[j]);
        }
        eval.reset();
        for (const NodeId x : perm) local[x] += eval.add(x);
      }
    }
    for (std::uint32_t i = 0; i < n; ++i)
      if (local[i]) sums[i].fetch_add(local[i], std::memory_order_relaxed);
  });

  std::vector<double> raw(n);
  for (std::uint32_t i = 0; i < n; ++i)
    raw[i] = static_cast<double>(sums[i].load()) / static_cast<double>(samples);
  return raw;
}

std::vector<double> exact_shapley_raw_subsets(const DirectedGraph& g) {
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("shapley needs at least two nodes");
  if (n > 12) throw InputError("subset enumeration supports at most 12 nodes");

  std::vector<std::uint32_t> out_mask(n, 0);
  for (NodeId u = 0; u < n; ++u)
    for (const NodeId w : g.out(u)) out_mask[u] |= 1u << w;

  const std::uint32_t full = 1u << n;
  std::vector<std::uint64_t> value(full, 0);
  for (std::uint32_t s = 1; s < full; ++s) {
    std::uint64_t pairs = 0;
    for (std::uint32_t rest = s; rest;) {
      const std::uint32_t u = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t reach = out_mask[u] & s;
      for (;;) {
        std::uint32_t grown = reach;
        for (std::uint32_t f = reach; f;) {
          const std::uint32_t w = std::countr_zero(f);
          f &= f - 1;
          grown |= out_mask[w];
        }
        grown &= s;
        if (grown == reach) break;
        reach = grown;
      }
      pairs += std::popcount(reach & ~(1u << u));
    }
    value[s] = pairs;
  }

  std::vector<double> factorial(n + 1, 1.0);
  for (std::uint32_t i = 1; i <= n; ++i)
    factorial[i] = factorial[i - 1] * static_cast<double>(i);
  std::vector<double> weight(n);  // |S|! (n-1-|S|)! / n!
  for (std::uint32_t s = 0; s < n; ++s)
    weight[s] = factorial[s] * factorial[n - 1 - s] / factorial[n];

  std::vector<double> phi(n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t s = 0; s < full; ++s) {
      if (s & bit) continue;
      const double gain = static_cast<double>(value[s | bit]) -
                          static_cast<double>(value[s]);
      phi[i] += weight[std::popcount(s)] * gain;
    }
  }
  return phi;
}

std::vector<double> exact_shapley_raw_permutations(const DirectedGraph& g) {
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("shapley needs at least two nodes");
  if (n > 8) throw InputError("permutation enumeration supports at most 8 nodes");

  ReachablePairsEvaluator eval(g);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::vector<std::uint64_t> sums(n, 0);
  std::uint64_t count = 0;
  do {
    eval.reset();
    for (const NodeId x : perm) sums[x] += eval.add(x);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<double> phi(n);
  for (std::uint32_t i = 0; i < n; ++i)
    phi[i] = static_cast<double>(sums[i]) / static_cast<double>(count);
  return phi;
}

std::vector<double> positivity_normalize(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw InputError("cannot normalize an empty score vector");
  const double lo = *std::min_element(scores.begin(), scores.end());
  std::vector<double> shifted(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] = scores[i] - lo;
    mean += shifted[i];
  }
  mean /= static_cast<double>(n);
  const double floor = mean > 0.0 ? 0.01 * mean : 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] += floor;
    total += shifted[i];
  }
  for (std::size_t i = 0; i < n; ++i) shifted[i] /= total;
  return shifted;
}

std::vector<double> monte_carlo_shapley_prices(const DirectedGraph& g,
                                               int num_samples,
                                               std::uint64_t seed,
                                               int threads) {
  const auto raw = monte_carlo_shapley_raw(g, num_samples, seed, threads);
  return positivity_normalize(raw);
}

std::vector<double> exact_shapley_prices(const DirectedGraph& g) {
  const auto raw = exact_shapley_raw_subsets(g);
  return positivity_normalize(raw);
}

NodeAttributes NodeAttributes::from_graph(const DirectedGraph& g) {
  NodeAttributes a;
  a.numeric.resize(g.n);
  double sum = 0.0;
  std::size_t present = 0;
  if (!g.node_value.empty()) {
    for (const double v : g.node_value) {
      if (!std::isnan(v)) {
        sum += v;
        ++present;
      }
    }
  }
  if (present == 0) {
    for (NodeId v = 0; v < g.n; ++v)
      a.numeric[v] = static_cast<double>(g.out_degree(v));
    return a;
  }
  const double fill = sum / static_cast<double>(present);
  for (NodeId v = 0; v < g.n; ++v) {
    const double x = g.node_value[v];
    a.numeric[v] = std::isnan(x) ? fill : x;
  }
  return a;
}

std::vector<double> entropy_scores(const DirectedGraph& g,
                                   const NodeAttributes& attrs,
                                   int bins) {
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("pricing needs at least two nodes");
  if (bins < 2) throw InputError("entropy needs at least two bins");

  std::vector<std::uint32_t> bin_of(n);
  std::uint32_t k = 0;
  if (attrs.is_categorical()) {
    if (attrs.category.size() != n)
      throw InputError("attribute table size mismatch");
    k = attrs.category_count;
    for (NodeId v = 0; v < n; ++v) {
      if (attrs.category[v] >= k) throw InputError("category id out of range");
      bin_of[v] = attrs.category[v];
    }
  } else {
    if (attrs.numeric.size() != n)
      throw InputError("attribute table size mismatch");
    k = static_cast<std::uint32_t>(bins);
    const auto [lo_it, hi_it] =
        std::minmax_element(attrs.numeric.begin(), attrs.numeric.end());
    const double lo = *lo_it, span = *hi_it - *lo_it;
    for (NodeId v = 0; v < n; ++v) {
      if (span == 0.0) {
        bin_of[v] = 0;
        continue;
      }
      const double t = (attrs.numeric[v] - lo) / span * static_cast<double>(k);
      bin_of[v] = std::min(k - 1, static_cast<std::uint32_t>(t));
    }
  }

  std::vector<std::uint64_t> count(k, 0);
  for (NodeId v = 0; v < n; ++v) ++count[bin_of[v]];
  std::vector<double> score(n);
  const double denom = static_cast<double>(n) + static_cast<double>(k);
  for (NodeId v = 0; v < n; ++v)
    score[v] = -std::log(static_cast<double>(count[bin_of[v]] + 1) / denom);
  return score;
}

std::vector<double> entropy_prices(const DirectedGraph& g,
                                   const NodeAttributes& attrs,
                                   int bins) {
  return positivity_normalize(entropy_scores(g, attrs, bins));
}

std::vector<double> degree_scores(const DirectedGraph& g) {
  const std::uint32_t n = g.n;
  if (n < 2) throw InputError("pricing needs at least two nodes");
  std::vector<double> score(n);
  const double denom = 2.0 * static_cast<double>(n - 1);
  for (NodeId v = 0; v < n; ++v)
    score[v] = static_cast<double>(g.in_degree(v) + g.out_degree(v)) / denom;
  return score;
}

std::vector<double> degree_centrality_prices(const DirectedGraph& g) {
  return positivity_normalize(degree_scores(g));
}

std::vector<double> eigenvector_scores(const DirectedGraph& g,
                                       const EigenvectorParams& p) {
  const std::uint32_t n = g.n;
  if (n == 0) throw InputError("graph is empty");
  if (!(p.damping >= 0.0 && p.damping < 1.0))
    throw InputError("damping must lie in [0, 1)");
  if (!(p.tol > 0.0)) throw InputError("tolerance must be positive");
  if (p.max_iter < 1) throw InputError("iteration cap must be positive");

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  double residual = 0.0;
  for (int it = 0; it < p.max_iter; ++it) {
    double sum_x = 0.0;
    for (const double v : x) sum_x += v;
    const double teleport = (1.0 - p.damping) * sum_x / static_cast<double>(n);
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const NodeId u : g.in(v)) acc += x[u];
      y[v] = p.damping * acc + teleport;
      total += y[v];
    }
    residual = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      y[v] /= total;
      residual += std::abs(y[v] - x[v]);
    }
    x.swap(y);
    if (residual < p.tol) return x;
  }
  throw PipelineError("eigenvector iteration did not converge; residual=" +
                      format_double(residual));
}

std::vector<double> eigenvector_centrality_prices(const DirectedGraph& g,
                                                  const EigenvectorParams& p) {
  return positivity_normalize(eigenvector_scores(g, p));
}

}  // namespace gnp
