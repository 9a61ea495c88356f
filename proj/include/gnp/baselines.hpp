#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gnp/graph.hpp"

namespace gnp {

// Coalition value shared by the Shapley baselines: ordered pairs (u, v),
// u != v, with v reachable from u inside the subgraph induced by the member
// set. Members are added one at a time; add() returns the exact integer
// increase in the pair count.
class ReachablePairsEvaluator {
 public:
  explicit ReachablePairsEvaluator(const DirectedGraph& g);

  void reset();
  std::uint64_t add(NodeId x);
  std::uint64_t pairs() const { return pairs_; }

 private:
  const DirectedGraph* g_;
  std::size_t words_;
  std::vector<std::uint64_t> reach_;  // reflexive closure rows, members only
  std::vector<std::uint64_t> in_mask_;
  std::vector<char> member_;
  std::vector<NodeId> members_;
  std::uint64_t pairs_ = 0;
};

// Shapley value estimate from sampled permutations. Marginal contributions
// are exact integers, accumulated per node and divided by the sample count,
// so results are identical for any thread count. Permutation k draws from
// its own stream_seed(seed, k) stream.
std::vector<double> monte_carlo_shapley_raw(const DirectedGraph& g,
                                            int num_samples,
                                            std::uint64_t seed,
                                            int threads = 0);

// Exact Shapley values by subset enumeration (n <= 12).
std::vector<double> exact_shapley_raw_subsets(const DirectedGraph& g);

// Exact Shapley values by full permutation enumeration (n <= 8). Agrees
// with the subset form up to floating-point roundoff.
std::vector<double> exact_shapley_raw_permutations(const DirectedGraph& g);

// Shifts scores to be nonnegative, adds a floor of 1% of the mean shifted
// score (1.0 when all scores are equal), and normalizes to sum 1. Strictly
// positive and order-preserving.
std::vector<double> positivity_normalize(std::span<const double> scores);

std::vector<double> monte_carlo_shapley_prices(const DirectedGraph& g,
                                               int num_samples,
                                               std::uint64_t seed,
                                               int threads = 0);
std::vector<double> exact_shapley_prices(const DirectedGraph& g);

// Per-node attribute used by the entropy baseline: numeric or categorical.
struct NodeAttributes {
  std::vector<double> numeric;
  std::vector<std::uint32_t> category;  // ids in [0, category_count)
  std::uint32_t category_count = 0;

  bool is_categorical() const { return category_count > 0; }

  // Third-column edge values averaged per node when the input carried any
  // (nodes without one get the mean of the observed values); out-degree
  // otherwise.
  static NodeAttributes from_graph(const DirectedGraph& g);
};

// -log of the add-one-smoothed frequency of the node's attribute bin.
// Numeric attributes use equal-width bins over the observed range.
std::vector<double> entropy_scores(const DirectedGraph& g,
                                   const NodeAttributes& attrs,
                                   int bins = 16);
std::vector<double> entropy_prices(const DirectedGraph& g,
                                   const NodeAttributes& attrs,
                                   int bins = 16);

// (in-degree + out-degree) / (2 * (n - 1)).
std::vector<double> degree_scores(const DirectedGraph& g);
std::vector<double> degree_centrality_prices(const DirectedGraph& g);

struct EigenvectorParams {
  double damping = 0.85;
  double tol = 1e-8;       // L1 residual between successive iterates
  int max_iter = 1000;
};

// Damped power iteration on incoming edges, L1-normalized each step:
// y[v] = damping * sum over edges u->v of x[u] + (1 - damping) * mean(x).
// Throws PipelineError with the final residual if it fails to converge.
std::vector<double> eigenvector_scores(const DirectedGraph& g,
                                       const EigenvectorParams& p = {});
std::vector<double> eigenvector_centrality_prices(const DirectedGraph& g,
                                                  const EigenvectorParams& p = {});

}  // namespace gnp
