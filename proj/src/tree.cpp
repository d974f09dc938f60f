#include "vgroup/tree.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace vgroup {

using nlohmann::json;

std::string Violation::message() const {
    return invariant + " (node " + std::to_string(node) + ")";
}

namespace {

// Shape-level checks shared by the constructor and validate().
std::optional<Violation> check_shape(std::span<const TreeNode> nodes, NodeId root) {
    const int m = static_cast<int>(nodes.size());
    if (m == 0) return Violation{"exactly one root", -1};
    std::vector<int> slot(m, -1);
    for (int i = 0; i < m; ++i) {
        const NodeId id = nodes[i].id;
        if (id < 0 || id >= m || slot[id] != -1) return Violation{"node ids are 0..M-1 and unique", id};
        slot[id] = i;
    }
    if (root < 0 || root >= m) return Violation{"exactly one root", root};
    std::vector<int> parents(m, 0);
    for (const TreeNode& n : nodes) {
        for (NodeId c : n.children) {
            if (c < 0 || c >= m) return Violation{"children reference existing nodes", n.id};
            if (++parents[c] > 1) return Violation{"every non-root has exactly one parent", c};
        }
    }
    if (parents[root] != 0) return Violation{"exactly one root", root};
    for (NodeId v = 0; v < m; ++v) {
        if (v != root && parents[v] == 0) return Violation{"exactly one root", v};
    }
    // With single parents everywhere, reachability from the root rules out cycles.
    std::vector<char> seen(m, 0);
    std::vector<NodeId> stack{root};
    int visited = 0;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        if (seen[v]) return Violation{"acyclic", v};
        seen[v] = 1;
        ++visited;
        for (NodeId c : nodes[slot[v]].children) stack.push_back(c);
    }
    if (visited != m) {
        for (NodeId v = 0; v < m; ++v) {
            if (!seen[v]) return Violation{"acyclic", v};
        }
    }
    return std::nullopt;
}

} // namespace

GroupTree::GroupTree(std::vector<TreeNode> nodes, NodeId root) : root_(root) {
    if (auto v = check_shape(nodes, root)) throw ValidationError("invalid tree: " + v->message());
    std::ranges::sort(nodes, {}, &TreeNode::id);
    nodes_ = std::move(nodes);
    const int m = size();
    parent_.assign(m, -1);
    depth_.assign(m, 0);
    leaves_.assign(m, {});

    int max_path = -1;
    for (const TreeNode& n : nodes_) {
        for (NodeId c : n.children) parent_[c] = n.id;
        if (n.path) max_path = std::max(max_path, *n.path);
    }
    leaf_of_path_.assign(max_path + 1, -1);

    const std::vector<NodeId> order = preorder();
    for (NodeId v : order) {
        if (v != root_) depth_[v] = depth_[parent_[v]] + 1;
        height_ = std::max(height_, depth_[v]);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const TreeNode& n = nodes_[*it];
        if (n.children.empty()) {
            if (n.path) {
                leaves_[n.id] = {*n.path};
                if (*n.path >= 0 && leaf_of_path_[*n.path] == -1) leaf_of_path_[*n.path] = n.id;
            }
            continue;
        }
        PathSet merged;
        for (NodeId c : n.children) merged.insert(merged.end(), leaves_[c].begin(), leaves_[c].end());
        leaves_[n.id] = make_path_set(std::move(merged));
    }
}

void GroupTree::check(NodeId v) const {
    if (v < 0 || v >= size()) throw UnknownNode("unknown node id " + std::to_string(v));
}

const TreeNode& GroupTree::node(NodeId v) const {
    check(v);
    return nodes_[v];
}

std::optional<NodeId> GroupTree::parent(NodeId v) const {
    check(v);
    if (parent_[v] < 0) return std::nullopt;
    return parent_[v];
}

int GroupTree::depth(NodeId v) const {
    check(v);
    return depth_[v];
}

NodeId GroupTree::leaf_of_path(int path) const {
    if (path < 0 || path >= static_cast<int>(leaf_of_path_.size()) || leaf_of_path_[path] < 0) {
        throw UnknownNode("no leaf for path " + std::to_string(path));
    }
    return leaf_of_path_[path];
}

const PathSet& GroupTree::leaves_of(NodeId v) const {
    check(v);
    return leaves_[v];
}

NodeId GroupTree::lca(NodeId a, NodeId b) const {
    check(a);
    check(b);
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
        a = parent_[a];
        b = parent_[b];
    }
    return a;
}

int GroupTree::tdist(NodeId a, NodeId b) const {
    return depth(a) + depth(b) - 2 * depth_[lca(a, b)];
}

bool GroupTree::is_descendant(NodeId v, NodeId anc) const {
    check(v);
    check(anc);
    while (depth_[v] > depth_[anc]) v = parent_[v];
    return v == anc;
}

std::vector<NodeId> GroupTree::preorder() const {
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        const auto& ch = nodes_[v].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return order;
}

std::optional<Violation> validate(std::span<const TreeNode> nodes, NodeId root, int n_paths) {
    if (auto v = check_shape(nodes, root)) return v;
    std::vector<const TreeNode*> by_id(nodes.size());
    for (const TreeNode& n : nodes) by_id[n.id] = &n;
    std::vector<NodeId> owner(std::max(n_paths, 0), -1);
    for (const TreeNode* n : by_id) {
        if (n->children.size() == 1) return Violation{"internal node with <2 children", n->id};
        if (!n->children.empty() && n->path) return Violation{"only leaves carry a path", n->id};
        if (n->children.empty()) {
            if (!n->path) return Violation{"leaf without path index", n->id};
            const int p = *n->path;
            if (p < 0 || p >= n_paths || owner[p] != -1) return Violation{"leaf bijection", n->id};
            owner[p] = n->id;
        }
    }
    for (int p = 0; p < n_paths; ++p) {
        if (owner[p] == -1) return Violation{"leaf bijection (path " + std::to_string(p) + " missing)", root};
    }
    return std::nullopt;
}

std::optional<Violation> validate(const GroupTree& tree, int n_paths) {
    return validate(tree.nodes(), tree.root(), n_paths);
}

std::string serialize(const GroupTree& tree, int indent) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes()) {
        json jn = {{"id", n.id}, {"children", n.children}};
        if (n.path) jn["path"] = *n.path;
        nodes.push_back(std::move(jn));
    }
    return json{{"root", tree.root()}, {"nodes", std::move(nodes)}}.dump(indent);
}

namespace {

NodeId build_nested(const json& j, std::vector<TreeNode>& out) {
    const NodeId id = static_cast<NodeId>(out.size());
    out.push_back({id, {}, std::nullopt});
    if (j.is_number_integer()) {
        out[id].path = j.get<int>();
        return id;
    }
    if (!j.is_array()) throw ParseError("nested tree: expected integer or array");
    for (const json& child : j) {
        const NodeId c = build_nested(child, out);
        out[id].children.push_back(c);
    }
    return id;
}

} // namespace

GroupTree deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("tree json: ") + e.what());
    }
    std::vector<TreeNode> nodes;
    NodeId root = 0;
    try {
        if (j.is_array()) {
            root = build_nested(j, nodes);
        } else if (j.is_object() && j.contains("root") && j.contains("nodes")) {
            root = j.at("root").get<NodeId>();
            for (const json& jn : j.at("nodes")) {
                TreeNode n;
                n.id = jn.at("id").get<NodeId>();
                n.children = jn.at("children").get<std::vector<NodeId>>();
                if (jn.contains("path") && !jn.at("path").is_null()) n.path = jn.at("path").get<int>();
                nodes.push_back(std::move(n));
            }
        } else {
            throw ParseError("tree json: expected {root, nodes} or a nested list");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("tree json: ") + e.what());
    }
    const int leaves = static_cast<int>(std::ranges::count_if(nodes, [](const TreeNode& n) { return n.children.empty(); }));
    if (auto v = validate(nodes, root, leaves)) throw ValidationError("invalid tree: " + v->message());
    return GroupTree(std::move(nodes), root);
}

} // namespace vgroup
