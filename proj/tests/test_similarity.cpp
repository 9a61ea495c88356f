#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/errors.hpp"
#include "gnp/graph.hpp"
#include "gnp/profiles.hpp"
#include "gnp/similarity.hpp"
#include "helpers.hpp"

using namespace gnp;
using testutil::graph_from_edges;
using testutil::random_rooted;

namespace {

NodeId id_of(const RootedGraph& rg, std::uint64_t label) {
  for (NodeId v = 0; v < rg.graph.n; ++v)
    if (rg.graph.labels[v] == label) return v;
  REQUIRE(false);
  return kNoNode;
}

double overlap_ratio(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b) {
  if (a.empty()) return 0.0;
  std::vector<std::uint32_t> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  return static_cast<double>(inter.size()) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("reference graph directed similarities") {
  const RootedGraph rg = preprocess(
      graph_from_edges({{0, 1}, {1, 3}, {1, 5}, {3, 5}, {3, 6}, {5, 6},
                        {5, 8}, {6, 9}}),
      RootSpec::designated(0));
  const ProfileSet p = collect_profiles(rg);
  const NodeId a = id_of(rg, 1), b = id_of(rg, 3);
  // in(1)={0->1}, in(3)={0->1,1->3}: overlap 1; out overlap 5 of 7 vs 5 of 5.
  const double s_ab = pairwise_similarity(profile_of(p, a), profile_of(p, b));
  const double s_ba = pairwise_similarity(profile_of(p, b), profile_of(p, a));
  CHECK(s_ab == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(s_ba == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  CHECK(s_ab == 0.5 * (1.0 / 1.0 + 5.0 / 7.0));
  CHECK(s_ba == 0.5 * (1.0 / 2.0 + 5.0 / 5.0));
}

TEST_CASE("self similarity reflects empty sides") {
  const RootedGraph rg =
      preprocess(graph_from_edges({{0, 1}, {1, 2}}), RootSpec::designated(0));
  const ProfileSet p = collect_profiles(rg);
  // Root has an empty incoming set, the sink an empty outgoing set.
  CHECK(pairwise_similarity(profile_of(p, id_of(rg, 0)),
                            profile_of(p, id_of(rg, 0))) == 0.5);
  CHECK(pairwise_similarity(profile_of(p, id_of(rg, 1)),
                            profile_of(p, id_of(rg, 1))) == 1.0);
  CHECK(pairwise_similarity(profile_of(p, id_of(rg, 2)),
                            profile_of(p, id_of(rg, 2))) == 0.5);
}

TEST_CASE("sibling leaves of a star tree have zero similarity") {
  // Distinct leaf profiles share the parent edge only through incoming;
  // two different leaves share no incoming edge and have empty outgoing.
  const RootedGraph rg = preprocess(
      graph_from_edges({{0, 1}, {0, 2}, {0, 3}}), RootSpec::designated(0));
  const ProfileSet p = collect_profiles(rg);
  const double s = pairwise_similarity(profile_of(p, id_of(rg, 1)),
                                       profile_of(p, id_of(rg, 2)));
  CHECK(s == 0.0);
}

TEST_CASE("mean scores equal the direct pair loop") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const RootedGraph rg = random_rooted(20 + seed * 5, 60 + seed * 11, seed);
    const DominatorTree t = compute_dominator_tree(rg);
    const ProfileSet p = collect_profiles(tree_as_rooted_graph(t));
    const std::vector<double> got = exact_similarity_scores(p);
    REQUIRE(got.size() == p.node_count());
    const std::uint32_t n = p.node_count();
    for (NodeId i = 0; i < n; ++i) {
      double sum = 0.0;
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        sum += 0.5 * (overlap_ratio(p.incoming[i], p.incoming[j]) +
                      overlap_ratio(p.outgoing[i], p.outgoing[j]));
      }
      CHECK(got[i] == doctest::Approx(sum / (n - 1)).epsilon(1e-12));
      CHECK(got[i] >= 0.0);
      CHECK(got[i] <= 1.0);
    }
    // Tree convenience overload takes the same route.
    CHECK(exact_similarity_scores(t) == got);
  }
}

TEST_CASE("scores are equivariant under label permutation") {
  const std::uint32_t n = 30;
  const DirectedGraph g = generate_random_graph(n, 120, 13);
  const RootedGraph rg = preprocess(g, RootSpec::virtual_super_root());
  const std::vector<double> base = exact_similarity_scores(
      collect_profiles(rg));

  // Relabel via an order-shuffling bijection and recompute.
  std::map<std::uint64_t, std::uint64_t> pi;
  for (NodeId v = 0; v < n; ++v) pi[v] = (v * 37 + 11) % 97;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (const NodeId w : g.out(u))
      edges.emplace_back(pi[g.labels[u]], pi[g.labels[w]]);
  const RootedGraph rg2 = preprocess(testutil::graph_from_edges(edges),
                                     RootSpec::virtual_super_root());
  REQUIRE(rg2.graph.n == rg.graph.n);
  const std::vector<double> perm = exact_similarity_scores(
      collect_profiles(rg2));

  for (NodeId v = 0; v < rg.graph.n; ++v) {
    const std::uint64_t lbl = rg.graph.labels[v];
    const std::uint64_t mapped =
        rg.is_virtual(v) ? kSyntheticRootLabel : pi[lbl];
    const NodeId v2 = [&] {
      for (NodeId u = 0; u < rg2.graph.n; ++u)
        if (rg2.graph.labels[u] == mapped) return u;
      return kNoNode;
    }();
    REQUIRE(v2 != kNoNode);
    CHECK(base[v] == doctest::Approx(perm[v2]).epsilon(1e-12));
  }
}

TEST_CASE("thread count does not change scores at all") {
  const RootedGraph rg = random_rooted(50, 160, 3);
  const ProfileSet p = collect_profiles(rg);
  const std::vector<double> one = exact_similarity_scores(p, 1);
  const std::vector<double> two = exact_similarity_scores(p, 2);
  const std::vector<double> any = exact_similarity_scores(p, 0);
  CHECK(one == two);
  CHECK(one == any);
}

TEST_CASE("a single node cannot be scored") {
  ProfileSet p;
  p.incoming.resize(1);
  p.outgoing.resize(1);
  CHECK_THROWS_AS(exact_similarity_scores(p), InputError);
  ProfileSet empty;
  CHECK_THROWS_AS(exact_similarity_scores(empty), InputError);
}
