#include "gnp/similarity.hpp"

#include "gnp/errors.hpp"
#include "gnp/kernels.hpp"
#include "gnp/parallel.hpp"

namespace gnp {

double pairwise_similarity(const ProfileView& a, const ProfileView& b) {
  double in_ratio = 0.0;
  if (!a.incoming.empty()) {
    const std::size_t common = kernels::intersect_count_u32(
        a.incoming.data(), a.incoming.size(), b.incoming.data(), b.incoming.size());
    in_ratio = static_cast<double>(common) / static_cast<double>(a.incoming.size());
  }
  double out_ratio = 0.0;
  if (!a.outgoing.empty()) {
    const std::size_t common = kernels::intersect_count_u32(
        a.outgoing.data(), a.outgoing.size(), b.outgoing.data(), b.outgoing.size());
    out_ratio = static_cast<double>(common) / static_cast<double>(a.outgoing.size());
  }
  return 0.5 * (in_ratio + out_ratio);
}

std::vector<double> exact_similarity_scores(const ProfileSet& profiles,
                                            int threads) {
  const std::uint32_t n = profiles.node_count();
  if (n < 2)
    throw InputError("similarity scores need at least two nodes");

  std::vector<double> scores(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    const ProfileView a = profile_of(profiles, static_cast<NodeId>(i));
    const double in_size = static_cast<double>(a.incoming.size());
    const double out_size = static_cast<double>(a.outgoing.size());
    double sum = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const ProfileView b = profile_of(profiles, j);
      double s = 0.0;
      if (in_size > 0) {
        s += 0.5 *
             static_cast<double>(kernels::intersect_count_u32(
                 a.incoming.data(), a.incoming.size(), b.incoming.data(),
                 b.incoming.size())) /
             in_size;
      }
      if (out_size > 0) {
        s += 0.5 *
             static_cast<double>(kernels::intersect_count_u32(
                 a.outgoing.data(), a.outgoing.size(), b.outgoing.data(),
                 b.outgoing.size())) /
             out_size;
      }
      sum += s;
    }
    scores[i] = sum / static_cast<double>(n - 1);
  });
  return scores;
}

std::vector<double> exact_similarity_scores(const DominatorTree& t,
                                            int threads) {
  const ProfileSet profiles = collect_profiles(tree_as_rooted_graph(t), threads);
  return exact_similarity_scores(profiles, threads);
}

}  // namespace gnp
