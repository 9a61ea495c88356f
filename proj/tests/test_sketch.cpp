#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/errors.hpp"
#include "gnp/graph.hpp"
#include "gnp/profiles.hpp"
#include "gnp/sketch.hpp"
#include "helpers.hpp"

using namespace gnp;
using testutil::jaccard;
using testutil::random_rooted;

namespace {

std::vector<std::uint32_t> random_subset(std::uint32_t universe,
                                         std::uint32_t size,
                                         SplitMix64& rng) {
  std::set<std::uint32_t> s;
  while (s.size() < size)
    s.insert(static_cast<std::uint32_t>(rng.below(universe)));
  return {s.begin(), s.end()};
}

// Pair of sets engineered to share roughly `shared` elements.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> set_pair(
    std::uint32_t shared, std::uint32_t extra_a, std::uint32_t extra_b,
    SplitMix64& rng) {
  const auto common = random_subset(1u << 24, shared, rng);
  std::set<std::uint32_t> a(common.begin(), common.end());
  std::set<std::uint32_t> b(common.begin(), common.end());
  while (a.size() < shared + extra_a)
    a.insert(static_cast<std::uint32_t>(rng.below(1u << 24)) | (1u << 25));
  while (b.size() < shared + extra_b)
    b.insert(static_cast<std::uint32_t>(rng.below(1u << 24)) | (1u << 26));
  return {{a.begin(), a.end()}, {b.begin(), b.end()}};
}

}  // namespace

TEST_CASE("identical sets produce identical signatures") {
  const MinHasher h(64, 9);
  SplitMix64 rng(4);
  const auto keys = random_subset(1000, 40, rng);
  auto shuffled = keys;
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  const auto s1 = h.signature(keys);
  const auto s2 = h.signature(shuffled);
  CHECK(s1 == s2);
  CHECK(estimate_jaccard(s1, s2) == 1.0);
  // Incremental updates reach the same signature.
  auto s3 = h.empty_signature();
  for (const std::uint32_t k : shuffled) h.update(s3.data(), k);
  CHECK(s3 == s1);
}

TEST_CASE("empty sets share the sentinel signature") {
  const MinHasher h(32, 123);
  const auto empty1 = h.signature({});
  const auto empty2 = h.empty_signature();
  CHECK(empty1 == empty2);
  for (const std::uint64_t lane : empty1) CHECK(lane == ~0ull);
  CHECK(estimate_jaccard(empty1, empty2) == 1.0);
  SplitMix64 rng(8);
  const auto sig = h.signature(random_subset(1000, 25, rng));
  CHECK(estimate_jaccard(empty1, sig) == 0.0);
}

TEST_CASE("different seeds permute the hash family") {
  SplitMix64 rng(77);
  const auto keys = random_subset(5000, 60, rng);
  const MinHasher h1(64, 1), h2(64, 2);
  CHECK(h1.signature(keys) != h2.signature(keys));
  // Same seed is reproducible.
  const MinHasher h1b(64, 1);
  CHECK(h1.signature(keys) == h1b.signature(keys));
}

TEST_CASE("jaccard estimates are close on random pairs") {
  const MinHasher h(128, 5);
  SplitMix64 rng(99);
  double abs_err = 0.0;
  int pairs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t shared = 2 + static_cast<std::uint32_t>(rng.below(60));
    const std::uint32_t ea = static_cast<std::uint32_t>(rng.below(40));
    const std::uint32_t eb = static_cast<std::uint32_t>(rng.below(40));
    const auto [a, b] = set_pair(shared, ea, eb, rng);
    const double exact = jaccard(a, b);
    const double est = estimate_jaccard(h.signature(a), h.signature(b));
    abs_err += std::abs(est - exact);
    ++pairs;
  }
  CHECK(abs_err / pairs <= 0.09);
}

TEST_CASE("optimal_bands stays within budget and brackets the threshold") {
  for (const double t : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    const BandShape s = optimal_bands(128, t);
    CHECK(s.bands >= 1);
    CHECK(s.rows >= 1);
    CHECK(s.bands * s.rows <= 128);
    // The S-curve knee (1/b)^(1/r) should track the requested threshold.
    const double knee = std::pow(1.0 / s.bands, 1.0 / s.rows);
    CHECK(std::abs(knee - t) <= 0.25);
  }
  CHECK_THROWS_AS(optimal_bands(0, 0.5), InputError);
  CHECK_THROWS_AS(optimal_bands(128, 0.0), InputError);
  CHECK_THROWS_AS(optimal_bands(128, 1.0), InputError);
}

TEST_CASE("index retrieves every node for itself") {
  const RootedGraph rg = random_rooted(80, 240, 17);
  const DominatorTree t = compute_dominator_tree(rg);
  const LshIndex index = LshIndex::build(t, LshParams{64, 0.5, 3});
  REQUIRE(index.node_count() == t.n());
  for (NodeId v = 0; v < t.n(); ++v) {
    const auto in_c = index.incoming_candidates(v);
    const auto out_c = index.outgoing_candidates(v);
    CHECK(std::binary_search(in_c.begin(), in_c.end(), v));
    CHECK(std::binary_search(out_c.begin(), out_c.end(), v));
    CHECK(std::is_sorted(in_c.begin(), in_c.end()));
    CHECK(std::is_sorted(out_c.begin(), out_c.end()));
    CHECK(in_c.back() < t.n());
    CHECK(out_c.back() < t.n());
  }
}

TEST_CASE("tree build equals the materialized-profile build") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const RootedGraph rg = random_rooted(30 + seed * 20, 100 + seed * 60,
                                         seed + 50);
    const DominatorTree t = compute_dominator_tree(rg);
    const LshParams params{64, 0.5, seed};
    const LshIndex from_tree = LshIndex::build(t, params);
    const LshIndex from_profiles =
        LshIndex::build(collect_profiles(tree_as_rooted_graph(t)), params);
    REQUIRE(from_tree.node_count() == from_profiles.node_count());
    CHECK(from_tree.shape().bands == from_profiles.shape().bands);
    CHECK(from_tree.shape().rows == from_profiles.shape().rows);
    for (NodeId v = 0; v < t.n(); ++v) {
      CHECK(from_tree.incoming_candidates(v) ==
            from_profiles.incoming_candidates(v));
      CHECK(from_tree.outgoing_candidates(v) ==
            from_profiles.outgoing_candidates(v));
    }
    CHECK(from_tree.scores() == from_profiles.scores());
  }
}

TEST_CASE("scores count retrieved neighbors excluding self") {
  const RootedGraph rg = random_rooted(60, 180, 29);
  const DominatorTree t = compute_dominator_tree(rg);
  const LshIndex index = LshIndex::build(t, LshParams{64, 0.5, 11});
  const std::vector<double> scores = index.scores();
  REQUIRE(scores.size() == t.n());
  for (NodeId v = 0; v < t.n(); ++v) {
    std::set<NodeId> uni;
    const auto in_c = index.incoming_candidates(v);
    const auto out_c = index.outgoing_candidates(v);
    uni.insert(in_c.begin(), in_c.end());
    uni.insert(out_c.begin(), out_c.end());
    uni.erase(v);
    CHECK(scores[v] ==
          doctest::Approx(static_cast<double>(uni.size()) / t.n()));
    CHECK(scores[v] >= 0.0);
    CHECK(scores[v] <= 1.0);
  }
  CHECK(approx_similarity_scores(t, index) == scores);
}

TEST_CASE("grouped leaves retrieve each other through the empty side") {
  // Star: every leaf has an empty outgoing profile, hence one shared
  // sentinel signature and mutual retrieval on that side.
  const RootedGraph rg = preprocess(
      testutil::graph_from_edges(
          {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}}),
      RootSpec::designated(0));
  const DominatorTree t = compute_dominator_tree(rg);
  const LshIndex index = LshIndex::build(t, LshParams{32, 0.5, 0});
  for (NodeId v = 0; v < t.n(); ++v) {
    if (v == t.root) continue;
    const auto out_c = index.outgoing_candidates(v);
    CHECK(out_c.size() >= 5);  // all five leaves share the sentinel
    for (NodeId u = 0; u < t.n(); ++u)
      if (u != t.root)
        CHECK(std::binary_search(out_c.begin(), out_c.end(), u));
  }
}

TEST_CASE("high-overlap synthetic profiles are retrieved reliably") {
  // 60 nodes in 30 pairs; each pair's sets overlap with jaccard >= 0.75,
  // different pairs are disjoint. Both profile sides use the same sets.
  const std::uint32_t n = 60;
  ProfileSet p;
  p.incoming.resize(n);
  p.outgoing.resize(n);
  SplitMix64 rng(31);
  std::uint32_t next_key = 0;
  for (std::uint32_t k = 0; k < n; k += 2) {
    // 28 shared keys, 4 private per side: jaccard = 28/36 ~ 0.78.
    std::vector<std::uint32_t> shared, only_a, only_b;
    for (int i = 0; i < 28; ++i) shared.push_back(next_key++);
    for (int i = 0; i < 4; ++i) only_a.push_back(next_key++);
    for (int i = 0; i < 4; ++i) only_b.push_back(next_key++);
    std::vector<std::uint32_t> a = shared, b = shared;
    a.insert(a.end(), only_a.begin(), only_a.end());
    b.insert(b.end(), only_b.begin(), only_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    p.incoming[k] = a;
    p.incoming[k + 1] = b;
    p.outgoing[k] = a;
    p.outgoing[k + 1] = b;
  }
  const LshIndex index = LshIndex::build(p, LshParams{128, 0.5, 7});
  int caught = 0;
  for (std::uint32_t k = 0; k < n; k += 2) {
    const auto c = index.incoming_candidates(k);
    if (std::binary_search(c.begin(), c.end(), k + 1)) ++caught;
  }
  CHECK(caught >= 27);  // at least 90% of 30 true pairs
}

TEST_CASE("parameter validation") {
  const RootedGraph rg = random_rooted(10, 20, 1);
  const DominatorTree t = compute_dominator_tree(rg);
  CHECK_THROWS_AS(LshIndex::build(t, LshParams{8, 0.5, 0}), InputError);
  CHECK_THROWS_AS(LshIndex::build(t, LshParams{64, 0.0, 0}), InputError);
  CHECK_THROWS_AS(LshIndex::build(t, LshParams{64, 1.0, 0}), InputError);
  CHECK_THROWS_AS(MinHasher(0, 1), InputError);

  const std::vector<std::uint32_t> keys{1, 2, 3};
  const MinHasher h(16, 0);
  const auto a = h.signature(keys);
  const MinHasher h2(32, 0);
  const auto b = h2.signature(keys);
  CHECK_THROWS_AS(estimate_jaccard(a, b), InputError);
  const std::vector<std::uint64_t> none;
  CHECK_THROWS_AS(estimate_jaccard(none, none), InputError);
}
