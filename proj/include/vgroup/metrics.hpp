#pragma once

#include "vgroup/tree.hpp"

#include <span>
#include <vector>

namespace vgroup {

// Jaccard distance between the leaf sets of v in t1 and w in t2.
double relabel_cost(const GroupTree& t1, NodeId v, const GroupTree& t2, NodeId w);

// Unnormalized constrained edit distance: cheapest mapping that keeps
// ancestry and disjointness of subtrees, with unit deletions and Jaccard
// relabels. Children are matched by minimum-cost assignment, so child order
// is irrelevant. Throws LeafSetMismatch.
double constrained_edit_cost(const GroupTree& t1, const GroupTree& t2);

// constrained_edit_cost / (|V1| + |V2|), in [0, 1].
double cted(const GroupTree& t1, const GroupTree& t2);

struct Clustering {
    std::vector<PathSet> blocks; // sorted by smallest member
};

// Leaf sets of the nodes at depth d, plus singletons for shallower leaves.
Clustering depth_cut(const GroupTree& tree, int d);

// Pairwise Fowlkes-Mallows index of two clusterings of the same paths. When
// either side has no co-clustered pair the result is 1 if both sides are all
// singletons, else 0.
double fmi(const Clustering& a, const Clustering& b);
// fmi of the depth-d cuts. Throws LeafSetMismatch, std::invalid_argument for d < 1.
double fmi(const GroupTree& t1, const GroupTree& t2, int d);

// Best IoU between `group` and the leaf set of any node. Throws EmptyGroup,
// std::out_of_range for paths that are not leaves of the tree.
double node_overlap(std::span<const int> group, const GroupTree& tree);

// Mean node_overlap of every internal ground-truth node's leaf set in `tree`.
double mean_node_overlap(const GroupTree& ground_truth, const GroupTree& tree);

// Minimum-cost perfect assignment on a square cost matrix (row-major n x n).
// Returns the column assigned to each row.
std::vector<int> min_cost_assignment(std::span<const double> cost, int n);

} // namespace vgroup
