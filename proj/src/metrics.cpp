#include "vgroup/metrics.hpp"

#include "vgroup/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vgroup {

namespace {

void require_same_leaves(const GroupTree& t1, const GroupTree& t2) {
    if (t1.leaves_of(t1.root()) != t2.leaves_of(t2.root())) {
        throw LeafSetMismatch("trees cover different path sets");
    }
}

std::vector<NodeId> postorder(const GroupTree& t) {
    std::vector<NodeId> order = t.preorder();
    // Reversed preorder visits children before parents.
    std::ranges::reverse(order);
    return order;
}

} // namespace

double relabel_cost(const GroupTree& t1, NodeId v, const GroupTree& t2, NodeId w) {
    const PathSet& a = t1.leaves_of(v);
    const PathSet& b = t2.leaves_of(w);
    std::size_t inter = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(uni - inter) / static_cast<double>(uni);
}

std::vector<int> min_cost_assignment(std::span<const double> cost, int n) {
    // Shortest augmenting paths with potentials; 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

double constrained_edit_cost(const GroupTree& t1, const GroupTree& t2) {
    require_same_leaves(t1, t2);
    const int m1 = t1.size(), m2 = t2.size();

    std::vector<int> size1(m1, 1), size2(m2, 1);
    const std::vector<NodeId> post1 = postorder(t1), post2 = postorder(t2);
    for (NodeId v : post1) {
        for (NodeId c : t1.node(v).children) size1[v] += size1[c];
    }
    for (NodeId w : post2) {
        for (NodeId c : t2.node(w).children) size2[w] += size2[c];
    }

    // Deleting a whole subtree costs its size; deleting the forest below the
    // root costs one less.
    const auto del_tree1 = [&](NodeId v) { return static_cast<double>(size1[v]); };
    const auto del_tree2 = [&](NodeId w) { return static_cast<double>(size2[w]); };
    const auto del_forest1 = [&](NodeId v) { return static_cast<double>(size1[v] - 1); };
    const auto del_forest2 = [&](NodeId w) { return static_cast<double>(size2[w] - 1); };

    std::vector<double> dt(static_cast<std::size_t>(m1) * m2), df(static_cast<std::size_t>(m1) * m2);
    const auto at = [m2](NodeId v, NodeId w) { return static_cast<std::size_t>(v) * m2 + w; };
    const double big = static_cast<double>(m1 + m2 + 1);
    std::vector<double> matrix;

    for (NodeId v : post1) {
        const auto& kv = t1.node(v).children;
        for (NodeId w : post2) {
            const auto& kw = t2.node(w).children;

            // Forest distance between the children of v and of w.
            double forest;
            if (kv.empty()) {
                forest = del_forest2(w);
            } else if (kw.empty()) {
                forest = del_forest1(v);
            } else {
                forest = std::numeric_limits<double>::infinity();
                for (NodeId c : kw) forest = std::min(forest, del_forest2(w) + df[at(v, c)] - del_forest2(c));
                for (NodeId c : kv) forest = std::min(forest, del_forest1(v) + df[at(c, w)] - del_forest1(c));

                const int a = static_cast<int>(kv.size()), b = static_cast<int>(kw.size());
                const int n = a + b;
                matrix.assign(static_cast<std::size_t>(n) * n, 0.0);
                for (int s = 0; s < n; ++s) {
                    for (int t = 0; t < n; ++t) {
                        double c;
                        if (s < a && t < b) c = dt[at(kv[s], kw[t])];
                        else if (s < a) c = (t - b == s) ? del_tree1(kv[s]) : big;
                        else if (t < b) c = (s - a == t) ? del_tree2(kw[t]) : big;
                        else c = 0.0;
                        matrix[static_cast<std::size_t>(s) * n + t] = c;
                    }
                }
                const std::vector<int> assign = min_cost_assignment(matrix, n);
                double matched = 0;
                for (int s = 0; s < n; ++s) matched += matrix[static_cast<std::size_t>(s) * n + assign[s]];
                forest = std::min(forest, matched);
            }
            df[at(v, w)] = forest;

            double tree = forest + relabel_cost(t1, v, t2, w);
            for (NodeId c : kw) tree = std::min(tree, del_tree2(w) + dt[at(v, c)] - del_tree2(c));
            for (NodeId c : kv) tree = std::min(tree, del_tree1(v) + dt[at(c, w)] - del_tree1(c));
            dt[at(v, w)] = tree;
        }
    }
    return dt[at(t1.root(), t2.root())];
}

double cted(const GroupTree& t1, const GroupTree& t2) {
    return constrained_edit_cost(t1, t2) / static_cast<double>(t1.size() + t2.size());
}

Clustering depth_cut(const GroupTree& tree, int d) {
    if (d < 0) throw std::invalid_argument("depth_cut: depth must be non-negative");
    Clustering c;
    for (NodeId v = 0; v < tree.size(); ++v) {
        const int dv = tree.depth(v);
        if (dv == d || (dv < d && tree.is_leaf(v))) c.blocks.push_back(tree.leaves_of(v));
    }
    std::ranges::sort(c.blocks, {}, [](const PathSet& b) { return b.front(); });
    return c;
}

double fmi(const Clustering& a, const Clustering& b) {
    int max_path = -1;
    for (const auto& blk : a.blocks) max_path = std::max(max_path, blk.back());
    std::vector<int> label(max_path + 1, -1);
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        for (int p : a.blocks[i]) label[p] = static_cast<int>(i);
    }
    const auto pairs = [](double n) { return n * (n - 1) / 2; };
    double pa = 0, pb = 0, tp = 0;
    for (const auto& blk : a.blocks) pa += pairs(static_cast<double>(blk.size()));
    std::vector<int> counts(a.blocks.size());
    for (const auto& blk : b.blocks) {
        pb += pairs(static_cast<double>(blk.size()));
        std::ranges::fill(counts, 0);
        for (int p : blk) {
            if (p < 0 || p > max_path || label[p] < 0) throw LeafSetMismatch("clusterings cover different paths");
            ++counts[label[p]];
        }
        for (int n : counts) tp += pairs(n);
    }
    if (pa == 0 && pb == 0) return 1.0;
    if (pa == 0 || pb == 0) return 0.0;
    return tp / std::sqrt(pa * pb);
}

double fmi(const GroupTree& t1, const GroupTree& t2, int d) {
    if (d < 1) throw std::invalid_argument("fmi: depth must be at least 1");
    require_same_leaves(t1, t2);
    return fmi(depth_cut(t1, d), depth_cut(t2, d));
}

double node_overlap(std::span<const int> group, const GroupTree& tree) {
    if (group.empty()) throw EmptyGroup("node_overlap: empty group");
    const PathSet g = make_path_set({group.begin(), group.end()});
    const PathSet& all = tree.leaves_of(tree.root());
    for (int p : g) {
        if (!std::ranges::binary_search(all, p)) throw std::out_of_range("node_overlap: path " + std::to_string(p) + " is not a leaf");
    }
    double best = 0;
    for (NodeId v = 0; v < tree.size(); ++v) {
        const PathSet& l = tree.leaves_of(v);
        std::size_t inter = 0;
        for (int p : l) inter += std::ranges::binary_search(g, p) ? 1 : 0;
        best = std::max(best, static_cast<double>(inter) / static_cast<double>(l.size() + g.size() - inter));
    }
    return best;
}

double mean_node_overlap(const GroupTree& ground_truth, const GroupTree& tree) {
    double sum = 0;
    int count = 0;
    for (NodeId v = 0; v < ground_truth.size(); ++v) {
        if (ground_truth.is_leaf(v)) continue;
        sum += node_overlap(ground_truth.leaves_of(v), tree);
        ++count;
    }
    return count == 0 ? 1.0 : sum / count;
}

} // namespace vgroup
