#include "vgroup/affinity.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vgroup {

using nlohmann::json;

double Embedding::norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

Embedding normalized(std::span<const double> raw) {
    if (raw.size() != kEmbeddingDim) throw std::invalid_argument("normalized: expected 64 values");
    double s = 0;
    for (double v : raw) s += v * v;
    Embedding e;
    const double n = std::sqrt(s);
    if (!(n > 0) || !std::isfinite(n)) {
        e.values[0] = 1.0;
        return e;
    }
    for (int i = 0; i < kEmbeddingDim; ++i) e.values[i] = raw[i] / n;
    return e;
}

double cosine_affinity(const Embedding& a, const Embedding& b) {
    double s = 0;
    for (int i = 0; i < kEmbeddingDim; ++i) s += a.values[i] * b.values[i];
    return s;
}

Embedding AffinityModel::embed(const VectorDocument&, const PathSet&) const {
    throw std::logic_error("this affinity model does not produce embeddings");
}

double EmbeddingModel::affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const {
    return cosine_affinity(embed(doc, a), embed(doc, b));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// --- oracle -----------------------------------------------------------------

OracleAffinity::OracleAffinity(GroupTree ground_truth)
    : gt_(std::move(ground_truth)), fingerprint_("oracle:" + hex64(fnv1a(serialize(gt_)))) {}

NodeId OracleAffinity::covering_node(const PathSet& s) const {
    if (s.empty()) throw EmptySubset("oracle affinity: empty subset");
    NodeId g = gt_.leaf_of_path(s.front());
    for (int p : s) g = gt_.lca(g, gt_.leaf_of_path(p));
    if (gt_.leaves_of(g).size() == s.size()) return g;
    // A proper part of g must be a union of whole children of g.
    for (NodeId c : gt_.node(g).children) {
        const PathSet& lc = gt_.leaves_of(c);
        const auto inside = std::ranges::count_if(lc, [&](int p) { return std::ranges::binary_search(s, p); });
        if (inside != 0 && inside != static_cast<std::ptrdiff_t>(lc.size())) {
            throw SubsetNotNested("subset {" + subset_key(s) + "} is not a union of ground-truth siblings");
        }
    }
    return g;
}

double OracleAffinity::affinity(const VectorDocument&, const PathSet& a, const PathSet& b) const {
    covering_node(a);
    covering_node(b);
    PathSet joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    joined = make_path_set(std::move(joined));
    NodeId g = gt_.leaf_of_path(joined.front());
    for (int p : joined) g = gt_.lca(g, gt_.leaf_of_path(p));
    return -static_cast<double>(gt_.leaves_of(g).size());
}

std::string OracleAffinity::fingerprint() const { return fingerprint_; }

// --- heuristic --------------------------------------------------------------

double hsv_distance(const Rgba& a, const Rgba& b) {
    const Hsv ha = rgb_to_hsv(a), hb = rgb_to_hsv(b);
    double dh = std::abs(ha.h - hb.h);
    dh = std::min(dh, 360.0 - dh) / 180.0;
    const double ds = ha.s - hb.s;
    const double dv = ha.v - hb.v;
    return std::sqrt((dh * dh + ds * ds + dv * dv) / 3.0);
}

namespace {

struct SubsetSummary {
    Point centroid;
    std::optional<Rgba> color;
};

SubsetSummary summarize(const VectorDocument& doc, const PathSet& s) {
    if (s.empty()) throw EmptySubset("heuristic affinity: empty subset");
    SubsetSummary out;
    Rgba sum{0, 0, 0, 0};
    int colored = 0;
    for (int p : s) {
        const PathElement& path = doc.paths.at(p);
        const Point c = normalize_point(doc, path_bbox(path).center());
        out.centroid = out.centroid + c;
        const auto& col = path.fill ? path.fill : path.stroke;
        if (col) {
            sum.r += col->r;
            sum.g += col->g;
            sum.b += col->b;
            ++colored;
        }
    }
    out.centroid = (1.0 / static_cast<double>(s.size())) * out.centroid;
    if (colored > 0) out.color = Rgba{sum.r / colored, sum.g / colored, sum.b / colored, 1.0};
    return out;
}

} // namespace

double HeuristicAffinity::affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const {
    const SubsetSummary sa = summarize(doc, a);
    const SubsetSummary sb = summarize(doc, b);
    double score = -distance(sa.centroid, sb.centroid);
    if (sa.color && sb.color) score -= color_weight_ * hsv_distance(*sa.color, *sb.color);
    return score;
}

std::string HeuristicAffinity::fingerprint() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "heuristic:%.17g", color_weight_);
    return buf;
}

// --- embedding table --------------------------------------------------------

void EmbeddingTable::insert(const PathSet& subset, std::span<const double> vector) {
    if (vector.size() != kEmbeddingDim) {
        throw FormatError("embedding for {" + subset_key(subset) + "} has " + std::to_string(vector.size()) +
                          " values, expected 64");
    }
    table_[subset_key(subset)] = normalized(vector);
}

Embedding EmbeddingTable::embed(const VectorDocument&, const PathSet& subset) const {
    const std::string key = subset_key(subset);
    const auto it = table_.find(key);
    if (it == table_.end()) throw UnknownSubset("no embedding for subset '" + key + "'");
    return it->second;
}

std::string EmbeddingTable::fingerprint() const { return "table:" + hex64(fnv1a(to_json())); }

EmbeddingTable EmbeddingTable::from_json(std::string_view text) {
    EmbeddingTable t;
    try {
        json j = json::parse(text);
        const json& entries = j.is_object() ? j.at("entries") : j;
        if (!entries.is_array()) throw FormatError("embedding table: expected an array of entries");
        for (const json& e : entries) {
            const std::string key = e.at("subset_key").get<std::string>();
            std::vector<int> idx;
            std::size_t start = 0;
            while (start <= key.size()) {
                std::size_t dash = key.find('-', start);
                if (dash == std::string::npos) dash = key.size();
                const std::string part = key.substr(start, dash - start);
                if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
                    throw FormatError("embedding table: malformed subset_key '" + key + "'");
                }
                idx.push_back(std::stoi(part));
                start = dash + 1;
            }
            const PathSet s = make_path_set(idx);
            if (subset_key(s) != key) throw FormatError("embedding table: subset_key '" + key + "' is not sorted");
            const auto vec = e.at("vector").get<std::vector<double>>();
            t.insert(s, vec);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("embedding table: ") + e.what());
    }
    return t;
}

std::string EmbeddingTable::to_json() const {
    json arr = json::array();
    for (const auto& [key, e] : table_) arr.push_back({{"subset_key", key}, {"vector", e.values}});
    return arr.dump();
}

} // namespace vgroup
