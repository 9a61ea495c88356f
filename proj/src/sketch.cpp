#include "gnp/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "gnp/errors.hpp"
#include "gnp/kernels.hpp"
#include "gnp/rng.hpp"

namespace gnp {

namespace {

constexpr std::uint64_t kSentinel = ~0ull;

void validate(const LshParams& p) {
  if (p.num_perm < 16) throw InputError("num_perm must be at least 16");
  if (!(p.threshold > 0.0 && p.threshold < 1.0))
    throw InputError("threshold must lie strictly between 0 and 1");
}

double collision_probability(double s, int rows, int bands) {
  return 1.0 - std::pow(1.0 - std::pow(s, rows), bands);
}

std::uint64_t band_key(const std::uint64_t* sig, int rows, int band) {
  std::uint64_t h = mix64(0x626e64ull ^ static_cast<std::uint64_t>(band));
  for (int r = 0; r < rows; ++r) h = mix64(h ^ sig[r]);
  return h;
}

}  // namespace

BandShape optimal_bands(int num_perm, double threshold) {
  if (num_perm < 1) throw InputError("num_perm must be positive");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InputError("threshold must lie strictly between 0 and 1");
  constexpr int kSteps = 100;
  BandShape best{1, 1};
  double best_err = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= num_perm; ++b) {
    const int max_r = num_perm / b;
    for (int r = 1; r <= max_r; ++r) {
      double fp = 0.0;  // collisions below the threshold
      const double dx_lo = threshold / kSteps;
      for (int i = 0; i < kSteps; ++i)
        fp += collision_probability((i + 0.5) * dx_lo, r, b) * dx_lo;
      double fn = 0.0;  // misses above the threshold
      const double dx_hi = (1.0 - threshold) / kSteps;
      for (int i = 0; i < kSteps; ++i)
        fn += (1.0 - collision_probability(threshold + (i + 0.5) * dx_hi, r, b)) * dx_hi;
      const double err = 0.5 * fp + 0.5 * fn;
      if (err < best_err) {
        best_err = err;
        best = {b, r};
      }
    }
  }
  return best;
}

MinHasher::MinHasher(int num_perm, std::uint64_t seed) {
  if (num_perm < 16) throw InputError("num_perm must be at least 16");
  SplitMix64 rng(stream_seed(seed, 0x6d686173ull));
  mul_.resize(num_perm);
  add_.resize(num_perm);
  for (int k = 0; k < num_perm; ++k) {
    mul_[k] = rng.next() | 1ull;  // odd multipliers are bijective mod 2^64
    add_[k] = rng.next();
  }
  key_seed_ = rng.next();
}

std::vector<std::uint64_t> MinHasher::empty_signature() const {
  return std::vector<std::uint64_t>(mul_.size(), kSentinel);
}

void MinHasher::update(std::uint64_t* sig, std::uint32_t key) const {
  const std::uint64_t mixed = mix64(static_cast<std::uint64_t>(key) ^ key_seed_);
  kernels::minhash_update(mixed, mul_.data(), add_.data(), sig, mul_.size());
}

std::vector<std::uint64_t> MinHasher::signature(
    std::span<const std::uint32_t> keys) const {
  auto sig = empty_signature();
  for (const std::uint32_t key : keys) update(sig.data(), key);
  return sig;
}

double estimate_jaccard(std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b) {
  if (a.size() != b.size() || a.empty())
    throw InputError("signatures must have equal, positive length");
  const std::size_t matches = kernels::match_count_u64(a.data(), b.data(), a.size());
  return static_cast<double>(matches) / static_cast<double>(a.size());
}

LshIndex::Side LshIndex::build_side(const std::vector<std::uint64_t>& sigs,
                                    std::uint32_t n, int num_perm,
                                    BandShape shape) {
  Side side;
  side.group_of.resize(n);

  // Group nodes by full signature; identical signatures behave identically
  // in every band, so they share one bucket entry and one candidate set.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_hash;
  by_hash.reserve(n * 2);
  std::vector<std::uint32_t> group_rep;  // group -> representative node
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t* sv = sigs.data() + static_cast<std::size_t>(v) * num_perm;
    std::uint64_t h = 0x736967ull;
    for (int k = 0; k < num_perm; ++k) h = mix64(h ^ sv[k]);
    auto& groups = by_hash[h];
    std::uint32_t found = 0xffffffffu;
    for (const std::uint32_t gid : groups) {
      const std::uint64_t* rep =
          sigs.data() + static_cast<std::size_t>(group_rep[gid]) * num_perm;
      if (std::equal(sv, sv + num_perm, rep)) {
        found = gid;
        break;
      }
    }
    if (found == 0xffffffffu) {
      found = static_cast<std::uint32_t>(group_rep.size());
      group_rep.push_back(v);
      groups.push_back(found);
      side.members.emplace_back();
    }
    side.group_of[v] = found;
    side.members[found].push_back(v);
  }

  const std::uint32_t group_count = static_cast<std::uint32_t>(group_rep.size());
  side.band_keys.resize(static_cast<std::size_t>(group_count) * shape.bands);
  side.buckets.assign(shape.bands, {});
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> key_slot(shape.bands);
  std::vector<std::vector<std::vector<std::uint32_t>>> bucket_groups(shape.bands);
  for (std::uint32_t gid = 0; gid < group_count; ++gid) {
    const std::uint64_t* sv =
        sigs.data() + static_cast<std::size_t>(group_rep[gid]) * num_perm;
    for (int b = 0; b < shape.bands; ++b) {
      const std::uint64_t key = band_key(sv + b * shape.rows, shape.rows, b);
      side.band_keys[static_cast<std::size_t>(gid) * shape.bands + b] = key;
      auto [it, inserted] = key_slot[b].emplace(key, bucket_groups[b].size());
      if (inserted) bucket_groups[b].emplace_back();
      bucket_groups[b][it->second].push_back(gid);
    }
  }
  // Flatten to sorted (key, group) pairs for deterministic binary-search
  // lookups independent of hash-map iteration order.
  for (int b = 0; b < shape.bands; ++b) {
    auto& flat = side.buckets[b];
    for (const auto& [key, slot] : key_slot[b])
      for (const std::uint32_t gid : bucket_groups[b][slot]) flat.emplace_back(key, gid);
    std::sort(flat.begin(), flat.end());
  }
  return side;
}

std::vector<std::uint32_t> LshIndex::Side::candidate_groups(std::uint32_t group,
                                                            int bands) const {
  std::vector<std::uint32_t> out;
  for (int b = 0; b < bands; ++b) {
    const std::uint64_t key = band_keys[static_cast<std::size_t>(group) * bands + b];
    const auto& flat = buckets[b];
    auto it = std::lower_bound(flat.begin(), flat.end(),
                               std::make_pair(key, std::uint32_t{0}));
    for (; it != flat.end() && it->first == key; ++it) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> LshIndex::Side::candidate_nodes(std::uint32_t group,
                                                    int bands) const {
  std::vector<NodeId> nodes;
  for (const std::uint32_t gid : candidate_groups(group, bands)) {
    nodes.insert(nodes.end(), members[gid].begin(), members[gid].end());
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

LshIndex LshIndex::from_signatures(std::vector<std::uint64_t> in_sigs,
                                   std::vector<std::uint64_t> out_sigs,
                                   std::uint32_t n, const LshParams& params) {
  LshIndex idx;
  idx.n_ = n;
  idx.params_ = params;
  idx.shape_ = optimal_bands(params.num_perm, params.threshold);
  idx.in_ = build_side(in_sigs, n, params.num_perm, idx.shape_);
  idx.out_ = build_side(out_sigs, n, params.num_perm, idx.shape_);
  return idx;
}

LshIndex LshIndex::build(const ProfileSet& profiles, const LshParams& params) {
  validate(params);
  const std::uint32_t n = profiles.node_count();
  const MinHasher hasher(params.num_perm, params.seed);
  const std::size_t lanes = static_cast<std::size_t>(params.num_perm);
  std::vector<std::uint64_t> in_sigs(n * lanes), out_sigs(n * lanes);
  for (NodeId v = 0; v < n; ++v) {
    auto in_sig = hasher.signature(profiles.incoming[v]);
    auto out_sig = hasher.signature(profiles.outgoing[v]);
    std::copy(in_sig.begin(), in_sig.end(), in_sigs.begin() + v * lanes);
    std::copy(out_sig.begin(), out_sig.end(), out_sigs.begin() + v * lanes);
  }
  return from_signatures(std::move(in_sigs), std::move(out_sigs), n, params);
}

LshIndex LshIndex::build(const DominatorTree& t, const LshParams& params) {
  validate(params);
  const std::uint32_t n = t.n();
  const MinHasher hasher(params.num_perm, params.seed);
  const std::size_t lanes = static_cast<std::size_t>(params.num_perm);

  // Edge ids in the tree's canonical (parent, child) ascending order.
  std::vector<std::uint32_t> edge_of_child(n, 0);
  {
    std::uint32_t next_id = 0;
    for (NodeId p = 0; p < n; ++p)
      for (const NodeId c : t.children(p)) edge_of_child[c] = next_id++;
  }

  std::vector<NodeId> preorder;
  preorder.reserve(n);
  preorder.push_back(t.root);
  for (std::size_t i = 0; i < preorder.size(); ++i)
    for (const NodeId c : t.children(preorder[i])) preorder.push_back(c);

  // incoming(v) = incoming(parent) + parent edge: one update per node.
  std::vector<std::uint64_t> in_sigs(n * lanes, kSentinel);
  for (const NodeId v : preorder) {
    if (v == t.root) continue;
    const NodeId p = t.idom[v];
    std::uint64_t* sig = in_sigs.data() + static_cast<std::size_t>(v) * lanes;
    std::copy(in_sigs.data() + static_cast<std::size_t>(p) * lanes,
              in_sigs.data() + static_cast<std::size_t>(p) * lanes + lanes, sig);
    hasher.update(sig, edge_of_child[v]);
  }

  // outgoing(v) = union of child subtrees and child edges: elementwise-min
  // merge bottom-up (the min-hash of a union is the lane minimum).
  std::vector<std::uint64_t> out_sigs(n * lanes, kSentinel);
  for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
    const NodeId v = *it;
    std::uint64_t* sig = out_sigs.data() + static_cast<std::size_t>(v) * lanes;
    for (const NodeId c : t.children(v)) {
      kernels::elementwise_min_u64(
          sig, out_sigs.data() + static_cast<std::size_t>(c) * lanes, lanes);
      hasher.update(sig, edge_of_child[c]);
    }
  }
  return from_signatures(std::move(in_sigs), std::move(out_sigs), n, params);
}

std::vector<NodeId> LshIndex::incoming_candidates(NodeId v) const {
  return in_.candidate_nodes(in_.group_of[v], shape_.bands);
}

std::vector<NodeId> LshIndex::outgoing_candidates(NodeId v) const {
  return out_.candidate_nodes(out_.group_of[v], shape_.bands);
}

std::vector<double> LshIndex::scores() const {
  const std::uint32_t n = n_;
  std::vector<double> result(n, 0.0);
  if (n == 0) return result;

  // Candidate node arrays per group, computed once per group.
  const std::uint32_t in_groups = static_cast<std::uint32_t>(in_.members.size());
  const std::uint32_t out_groups = static_cast<std::uint32_t>(out_.members.size());
  std::vector<std::vector<NodeId>> in_cand(in_groups);
  for (std::uint32_t g = 0; g < in_groups; ++g)
    in_cand[g] = in_.candidate_nodes(g, shape_.bands);

  // Process nodes grouped by outgoing group: stamp the (possibly huge)
  // outgoing candidate set once, then count each member's incoming extras
  // against the stamp. Avoids per-node merges against degenerate clusters.
  std::vector<std::uint32_t> stamp(n, 0xffffffffu);
  for (std::uint32_t g = 0; g < out_groups; ++g) {
    const std::vector<NodeId> out_nodes = out_.candidate_nodes(g, shape_.bands);
    for (const NodeId u : out_nodes) stamp[u] = g;
    for (const NodeId v : out_.members[g]) {
      std::size_t extra = 0;
      for (const NodeId u : in_cand[in_.group_of[v]]) extra += (stamp[u] != g);
      // v itself sits in its own outgoing bucket; exclude it.
      const std::size_t similar = out_nodes.size() + extra - 1;
      result[v] = static_cast<double>(similar) / static_cast<double>(n);
    }
  }
  return result;
}

std::vector<double> approx_similarity_scores(const DominatorTree& t,
                                             const LshIndex& index) {
  if (index.node_count() != t.n())
    throw InputError("index was built over a different node universe");
  return index.scores();
}

}  // namespace gnp
