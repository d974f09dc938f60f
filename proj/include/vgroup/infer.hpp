#pragma once

#include "vgroup/affinity.hpp"
#include "vgroup/tree.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vgroup {

struct MergeStep {
    NodeId first = 0;  // the older of the two merged roots
    NodeId second = 0;
    NodeId parent = 0;
    double affinity = 0; // NaN for container joins, which are not scored
};

// Agglomerative inference: starting from one leaf per path, repeatedly joins
// the two current roots with the highest affinity under a new parent. Leaf i
// gets node id i and the k-th merge creates node N + k, so the root is
// 2N - 2. Equal affinities go to the pair with the smallest older root id,
// then the smallest younger one. Throws EmptyDocument.
GroupTree greedy_tree(const AffinityModel& model, const VectorDocument& doc, std::vector<MergeStep>* log = nullptr);

// parent_of[p]: the smallest-area path that holds at least 95% of p's
// vertices and has a larger area than p (lowest index on ties).
struct ContainmentGraph {
    std::vector<std::optional<int>> parent_of;

    std::vector<int> children_of(int path) const;
    std::vector<int> roots() const;
    // Number of (container, contained) edges.
    int edge_count() const;
    // {"<path>": parent or null, ...}
    std::string to_json(int indent = -1) const;
};

ContainmentGraph containment_graph(const VectorDocument& doc);

// Respects the containment forest: the contained paths of each container are
// merged greedily among themselves, then joined with the container's own
// leaf under a new node. The forest roots are merged last. With no
// containment the result equals greedy_tree. Throws EmptyDocument.
GroupTree containment_guided_tree(const AffinityModel& model, const VectorDocument& doc,
                                  std::vector<MergeStep>* log = nullptr);

// True when for every edge q -> p the leaf of p lies below the parent of q's
// leaf (the node that pairs q with its contents).
bool realizes_containment(const GroupTree& tree, const ContainmentGraph& graph);

struct Suggestion {
    NodeId node = 0;
    double score = 0; // IoU of the node's leaves with the touched set
};

// Nodes ranked by IoU with `touched`, then by fewer leaves, then by lower id.
// Throws EmptyScribble; std::invalid_argument for k < 1.
std::vector<Suggestion> scribble_suggest(const GroupTree& tree, std::span<const int> touched, int k);

} // namespace vgroup
