#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/graph.hpp"

namespace gnp {

enum class CriticalityMode { Dominator, ShortestPath };
enum class SimilarityMode { Exact, MinHashLsh };

struct PricingConfig {
  RootSpec root;
  CriticalityMode criticality = CriticalityMode::Dominator;
  SimilarityMode similarity = SimilarityMode::Exact;
  int num_perm = 128;
  double threshold = 0.5;
  double epsilon = 1e-9;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = available parallelism
};

// Fraction of the other nodes that cannot be reached without v: proper
// dominator-tree descendants over n-1. The root scores 1.
std::vector<double> criticality_dominator(const DominatorTree& t);

// Fraction of the other nodes all of whose shortest root paths pass through
// v, decided by distance and path-count products from BFS counting. Counters
// are saturating 128-bit; on saturation the test falls back to an exact
// ancestor query in the dominator tree of the shortest-path DAG.
std::vector<double> criticality_shortest_path(const RootedGraph& rg,
                                              int threads = 0);

struct ScoreTable {
  std::vector<double> criticality;
  std::vector<double> mean_similarity;
  std::vector<double> substitutability;  // criticality * mean_similarity
};

ScoreTable substitutability(std::span<const double> criticality,
                            std::span<const double> mean_similarity);

// Log-scaled inverse pricing: w = -log(clamp(B, eps, 1-eps)) for B > 0;
// B = 0 nodes get the mean positive weight (uniform if none); prices are
// w / sum(w). Strictly positive, sums to 1, decreasing in B.
std::vector<double> derive_prices(std::span<const double> substitutability,
                                  double epsilon = 1e-9);

struct StageTimings {
  double preprocess_ms = 0;
  double dominators_ms = 0;
  double profiles_ms = 0;
  double similarity_ms = 0;
  double criticality_ms = 0;
  double scoring_ms = 0;
  double pricing_ms = 0;
  double total_ms = 0;
};

struct PricingReport {
  PricingConfig config;
  std::uint32_t input_n = 0;
  std::uint64_t input_m = 0;
  std::uint32_t analyzed_n = 0;  // includes the synthetic root if added
  std::uint64_t analyzed_m = 0;
  bool virtual_root = false;
  // One row per priced (real) node, ascending by label.
  std::vector<std::uint64_t> labels;
  ScoreTable scores;
  std::vector<double> prices;
  StageTimings timings;
};

// Full pipeline: preprocess, dominator tree, profiles, similarity,
// criticality, substitutability, prices. The synthetic root participates in
// the analysis universe but is never priced.
PricingReport price_graph(const DirectedGraph& g, const PricingConfig& cfg);

const char* to_string(CriticalityMode m);
const char* to_string(SimilarityMode m);

}  // namespace gnp
