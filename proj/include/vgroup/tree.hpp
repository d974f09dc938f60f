#pragma once

#include "vgroup/document.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vgroup {

using NodeId = int;

struct TreeNode {
    NodeId id = 0;
    std::vector<NodeId> children; // order preserved, not semantically meaningful
    std::optional<int> path;      // present iff leaf

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Violation {
    std::string invariant;
    NodeId node = -1;

    std::string message() const;
};

// Rooted tree over path indices. Construction checks the shape (dense ids,
// one parent per non-root node, everything reachable from the root); the
// remaining grouping invariants are reported by validate(). Immutable.
class GroupTree {
public:
    // Node ids must be exactly 0..M-1 (any order). Throws ValidationError.
    GroupTree(std::vector<TreeNode> nodes, NodeId root);

    int size() const { return static_cast<int>(nodes_.size()); }
    NodeId root() const { return root_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(NodeId v) const;

    std::optional<NodeId> parent(NodeId v) const;
    int depth(NodeId v) const;
    int height() const { return height_; }
    bool is_leaf(NodeId v) const { return node(v).children.empty(); }
    int leaf_count() const { return static_cast<int>(leaf_of_path_.size()); }

    // Leaf node carrying the given path index. Throws UnknownNode.
    NodeId leaf_of_path(int path) const;

    // Sorted path indices of the subtree T(v).
    const PathSet& leaves_of(NodeId v) const;

    NodeId lca(NodeId a, NodeId b) const;
    int tdist(NodeId a, NodeId b) const;
    // v <= anc in the ancestor order (reflexive).
    bool is_descendant(NodeId v, NodeId anc) const;

    std::vector<NodeId> preorder() const;

    friend bool operator==(const GroupTree& a, const GroupTree& b) {
        return a.root_ == b.root_ && a.nodes_ == b.nodes_;
    }

private:
    void check(NodeId v) const;

    std::vector<TreeNode> nodes_;
    NodeId root_ = 0;
    std::vector<NodeId> parent_;
    std::vector<int> depth_;
    std::vector<PathSet> leaves_;
    std::vector<NodeId> leaf_of_path_; // indexed by path, -1 if absent
    int height_ = 0;
};

// Checks every tree invariant on raw node data; the first violation wins.
std::optional<Violation> validate(std::span<const TreeNode> nodes, NodeId root, int n_paths);
std::optional<Violation> validate(const GroupTree& tree, int n_paths);

// tree.json: {root, nodes:[{id, children, path?}]}.
std::string serialize(const GroupTree& tree, int indent = -1);

// Accepts tree.json or the nested-list shorthand ([[0,1],[2,[3,4]]]: arrays
// are groups, integers are path indices, ids assigned in preorder). The
// leaves must biject onto 0..L-1. Throws ParseError / ValidationError.
GroupTree deserialize(std::string_view text);

} // namespace vgroup
