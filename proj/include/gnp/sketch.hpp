#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/profiles.hpp"

namespace gnp {

struct LshParams {
  int num_perm = 128;      // signature lanes; at least 16
  double threshold = 0.5;  // banding knee target, in (0, 1)
  std::uint64_t seed = 0;
};

struct BandShape {
  int bands = 0;
  int rows = 0;
};

// Band/row split whose S-curve knee best approximates the threshold:
// grid search over bands*rows <= num_perm minimizing equally weighted
// false-positive and false-negative integrals.
BandShape optimal_bands(int num_perm, double threshold);

// Seeded family of 64-bit affine permutation hashes over pre-mixed keys.
// An empty set hashes to the all-max sentinel signature, which can only
// collide with other empty sets.
class MinHasher {
 public:
  MinHasher(int num_perm, std::uint64_t seed);

  int num_perm() const { return static_cast<int>(mul_.size()); }
  std::vector<std::uint64_t> signature(std::span<const std::uint32_t> keys) const;
  // Folds one key into an existing signature.
  void update(std::uint64_t* sig, std::uint32_t key) const;
  std::vector<std::uint64_t> empty_signature() const;

 private:
  std::vector<std::uint64_t> mul_, add_;
  std::uint64_t key_seed_;
};

// Equal-lane fraction of two signatures: unbiased Jaccard estimate.
double estimate_jaccard(std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b);

// Banded index over the incoming and outgoing profile signatures of every
// node, kept as two separate bucket families. Nodes with identical
// signatures are grouped so that degenerate clusters (e.g. all-leaf empty
// outgoing sets) cost one bucket entry instead of one per node.
class LshIndex {
 public:
  // Signatures computed from materialized profile sets.
  static LshIndex build(const ProfileSet& profiles, const LshParams& params);
  // Signatures computed directly over the dominator tree: incoming along
  // root paths, outgoing by merging child signatures. Equivalent to building
  // from the tree's materialized profiles, without materializing them.
  static LshIndex build(const DominatorTree& t, const LshParams& params);

  std::uint32_t node_count() const { return n_; }
  const LshParams& params() const { return params_; }
  BandShape shape() const { return shape_; }

  // All nodes sharing at least one band bucket with v's signature
  // (v itself included), ascending.
  std::vector<NodeId> incoming_candidates(NodeId v) const;
  std::vector<NodeId> outgoing_candidates(NodeId v) const;

  // Per-node |union of incoming and outgoing candidates minus self| / n.
  std::vector<double> scores() const;

 private:
  struct Side {
    std::vector<std::uint32_t> group_of;        // node -> group
    std::vector<std::vector<NodeId>> members;   // group -> nodes, ascending
    std::vector<std::uint64_t> band_keys;       // group*bands + b
    // band -> bucket key -> group ids
    std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> buckets;

    std::vector<std::uint32_t> candidate_groups(std::uint32_t group,
                                                int bands) const;
    std::vector<NodeId> candidate_nodes(std::uint32_t group, int bands) const;
  };

  static LshIndex from_signatures(std::vector<std::uint64_t> in_sigs,
                                  std::vector<std::uint64_t> out_sigs,
                                  std::uint32_t n, const LshParams& params);
  static Side build_side(const std::vector<std::uint64_t>& sigs,
                         std::uint32_t n, int num_perm, BandShape shape);

  std::uint32_t n_ = 0;
  LshParams params_;
  BandShape shape_;
  Side in_, out_;
};

// Approximate similarity proxy: the fraction of the universe retrieved as
// LSH candidates for each node (self excluded). Not the same quantity as the
// exact mean similarity; used as its stand-in at scale.
std::vector<double> approx_similarity_scores(const DominatorTree& t,
                                             const LshIndex& index);

}  // namespace gnp
