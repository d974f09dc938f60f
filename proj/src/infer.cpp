#include "vgroup/infer.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <queue>

namespace vgroup {

namespace {

struct Cluster {
    NodeId node;
    PathSet leaves;
    std::optional<Embedding> embedding;
    bool alive = true;
};

struct Candidate {
    double affinity;
    int a, b; // cluster slots with node(a) < node(b)
    NodeId na, nb;
};

// Max-heap order: higher affinity first, then smaller (older, younger) ids.
struct CandidateLess {
    bool operator()(const Candidate& x, const Candidate& y) const {
        if (x.affinity != y.affinity) return x.affinity < y.affinity;
        if (x.na != y.na) return x.na > y.na;
        return x.nb > y.nb;
    }
};

// Node list of one inference run. Internal nodes are numbered in creation
// order after the leaves.
class Forest {
public:
    Forest(const AffinityModel& model, const VectorDocument& doc, std::vector<MergeStep>* log)
        : model_(model), doc_(doc), log_(log) {
        for (int i = 0; i < doc.size(); ++i) nodes_.push_back({i, {}, i});
    }

    NodeId join(NodeId a, NodeId b, double affinity) {
        const NodeId id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back({id, {a, b}, std::nullopt});
        if (log_) log_->push_back({a, b, id, affinity});
        return id;
    }

    // Greedily merges the given subtrees (node id + leaf set) into one and
    // returns its root. Embedding models are evaluated once per cluster.
    NodeId merge_all(std::vector<std::pair<NodeId, PathSet>> roots) {
        std::ranges::sort(roots, {}, &std::pair<NodeId, PathSet>::first);
        std::vector<Cluster> cl;
        cl.reserve(2 * roots.size());
        for (auto& [id, leaves] : roots) cl.push_back({id, std::move(leaves), std::nullopt, true});
        if (cl.size() == 1) return cl.front().node;

        const bool embeds = model_.has_embedding();
        auto prepare = [&](Cluster& c) {
            if (embeds) c.embedding = model_.embed(doc_, c.leaves);
        };
        auto score = [&](const Cluster& x, const Cluster& y) {
            return embeds ? cosine_affinity(*x.embedding, *y.embedding) : model_.affinity(doc_, x.leaves, y.leaves);
        };

        for (Cluster& c : cl) prepare(c);
        std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> heap;
        for (int i = 0; i < static_cast<int>(cl.size()); ++i) {
            for (int j = i + 1; j < static_cast<int>(cl.size()); ++j) {
                heap.push({score(cl[i], cl[j]), i, j, cl[i].node, cl[j].node});
            }
        }
        std::size_t live = cl.size();
        while (live > 1) {
            const Candidate top = heap.top();
            heap.pop();
            if (!cl[top.a].alive || !cl[top.b].alive) continue;
            cl[top.a].alive = cl[top.b].alive = false;

            PathSet joined = cl[top.a].leaves;
            joined.insert(joined.end(), cl[top.b].leaves.begin(), cl[top.b].leaves.end());
            Cluster merged{join(top.na, top.nb, top.affinity), make_path_set(std::move(joined)), std::nullopt, true};
            prepare(merged);
            cl.push_back(std::move(merged));
            --live;

            const int slot = static_cast<int>(cl.size()) - 1;
            for (int i = 0; i < slot; ++i) {
                if (cl[i].alive) heap.push({score(cl[i], cl[slot]), i, slot, cl[i].node, cl[slot].node});
            }
        }
        return cl.back().node;
    }

    GroupTree finish(NodeId root) && { return GroupTree(std::move(nodes_), root); }

private:
    const AffinityModel& model_;
    const VectorDocument& doc_;
    std::vector<MergeStep>* log_;
    std::vector<TreeNode> nodes_;
};

} // namespace

GroupTree greedy_tree(const AffinityModel& model, const VectorDocument& doc, std::vector<MergeStep>* log) {
    if (doc.paths.empty()) throw EmptyDocument("greedy_tree: document has no paths");
    Forest forest(model, doc, log);
    std::vector<std::pair<NodeId, PathSet>> roots;
    for (int i = 0; i < doc.size(); ++i) roots.push_back({i, {i}});
    const NodeId root = forest.merge_all(std::move(roots));
    return std::move(forest).finish(root);
}

// --- containment ------------------------------------------------------------

std::vector<int> ContainmentGraph::children_of(int path) const {
    std::vector<int> out;
    for (int p = 0; p < static_cast<int>(parent_of.size()); ++p) {
        if (parent_of[p] == path) out.push_back(p);
    }
    return out;
}

std::vector<int> ContainmentGraph::roots() const {
    std::vector<int> out;
    for (int p = 0; p < static_cast<int>(parent_of.size()); ++p) {
        if (!parent_of[p]) out.push_back(p);
    }
    return out;
}

int ContainmentGraph::edge_count() const {
    return static_cast<int>(std::ranges::count_if(parent_of, [](const auto& q) { return q.has_value(); }));
}

std::string ContainmentGraph::to_json(int indent) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t p = 0; p < parent_of.size(); ++p) {
        j[std::to_string(p)] = parent_of[p] ? nlohmann::ordered_json(*parent_of[p]) : nlohmann::ordered_json(nullptr);
    }
    return j.dump(indent);
}

ContainmentGraph containment_graph(const VectorDocument& doc) {
    const int n = doc.size();
    std::vector<double> area(n);
    std::vector<BBox> box(n);
    for (int i = 0; i < n; ++i) {
        area[i] = polygon_area(doc.paths[i].polyline);
        box[i] = path_bbox(doc.paths[i]);
    }
    ContainmentGraph g;
    g.parent_of.assign(n, std::nullopt);
    for (int p = 0; p < n; ++p) {
        const auto& pts = doc.paths[p].polyline;
        for (int q = 0; q < n; ++q) {
            if (q == p || !(area[q] > area[p]) || !box[q].overlaps(box[p])) continue;
            const auto& ring = doc.paths[q].polyline;
            const auto inside = std::ranges::count_if(pts, [&](Point v) { return point_in_polygon(v, ring); });
            if (static_cast<double>(inside) < 0.95 * static_cast<double>(pts.size())) continue;
            const auto& cur = g.parent_of[p];
            if (!cur || area[q] < area[*cur]) g.parent_of[p] = q;
        }
    }
    return g;
}

GroupTree containment_guided_tree(const AffinityModel& model, const VectorDocument& doc, std::vector<MergeStep>* log) {
    if (doc.paths.empty()) throw EmptyDocument("containment_guided_tree: document has no paths");
    const ContainmentGraph graph = containment_graph(doc);
    const int n = doc.size();
    std::vector<std::vector<int>> kids(n);
    for (int p = 0; p < n; ++p) {
        if (graph.parent_of[p]) kids[*graph.parent_of[p]].push_back(p);
    }

    Forest forest(model, doc, log);
    // Builds the subtree for path p and everything it contains; returns its
    // root and leaf set. Post-order, children in index order.
    auto build = [&](auto&& self, int p) -> std::pair<NodeId, PathSet> {
        if (kids[p].empty()) return {p, {p}};
        std::vector<std::pair<NodeId, PathSet>> parts;
        for (int c : kids[p]) parts.push_back(self(self, c));
        PathSet leaves{p};
        for (const auto& part : parts) leaves.insert(leaves.end(), part.second.begin(), part.second.end());
        leaves = make_path_set(std::move(leaves));
        const NodeId grouped = forest.merge_all(std::move(parts));
        return {forest.join(p, grouped, std::numeric_limits<double>::quiet_NaN()), std::move(leaves)};
    };

    std::vector<std::pair<NodeId, PathSet>> tops;
    for (int r : graph.roots()) tops.push_back(build(build, r));
    const NodeId root = forest.merge_all(std::move(tops));
    return std::move(forest).finish(root);
}

bool realizes_containment(const GroupTree& tree, const ContainmentGraph& graph) {
    for (int p = 0; p < static_cast<int>(graph.parent_of.size()); ++p) {
        if (!graph.parent_of[p]) continue;
        const auto anchor = tree.parent(tree.leaf_of_path(*graph.parent_of[p]));
        if (!anchor || !tree.is_descendant(tree.leaf_of_path(p), *anchor)) return false;
    }
    return true;
}

// --- scribble ---------------------------------------------------------------

std::vector<Suggestion> scribble_suggest(const GroupTree& tree, std::span<const int> touched, int k) {
    if (touched.empty()) throw EmptyScribble("scribble_suggest: no touched paths");
    if (k < 1) throw std::invalid_argument("scribble_suggest: k must be at least 1");
    const PathSet t = make_path_set({touched.begin(), touched.end()});
    std::vector<Suggestion> all;
    for (NodeId v = 0; v < tree.size(); ++v) {
        const PathSet& l = tree.leaves_of(v);
        std::size_t inter = 0;
        for (int p : l) inter += std::ranges::binary_search(t, p) ? 1 : 0;
        const double uni = static_cast<double>(l.size() + t.size() - inter);
        all.push_back({v, static_cast<double>(inter) / uni});
    }
    std::ranges::sort(all, [&](const Suggestion& a, const Suggestion& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto la = tree.leaves_of(a.node).size(), lb = tree.leaves_of(b.node).size();
        if (la != lb) return la < lb;
        return a.node < b.node;
    });
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(k)));
    return all;
}

} // namespace vgroup
