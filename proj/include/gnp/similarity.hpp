#pragma once

#include <vector>

#include "gnp/dominator.hpp"
#include "gnp/profiles.hpp"

namespace gnp {

// Directed structural similarity of a toward b: the average of the incoming
// and outgoing overlap ratios, each measured against a's own set sizes and
// defined as 0 when the respective set of a is empty. Not symmetric.
double pairwise_similarity(const ProfileView& a, const ProfileView& b);

// Mean similarity of each node toward all others: the exact O(n^2) pair
// loop. Requires at least two nodes.
std::vector<double> exact_similarity_scores(const ProfileSet& profiles,
                                            int threads = 0);

// Convenience: profiles over the dominator tree, then the pair loop.
std::vector<double> exact_similarity_scores(const DominatorTree& t,
                                            int threads = 0);

}  // namespace gnp
