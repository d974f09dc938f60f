#pragma once

#include "vgroup/document.hpp"
#include "vgroup/tree.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace vgroup {

inline constexpr int kEmbeddingDim = 64;

// Unit-norm vector; the codomain of every embedding model.
struct Embedding {
    std::array<double, kEmbeddingDim> values{};

    double norm() const;
    friend bool operator==(const Embedding&, const Embedding&) = default;
};

// L2-normalizes `raw` (size kEmbeddingDim). A zero vector maps to the first
// basis vector so the result is always unit length.
Embedding normalized(std::span<const double> raw);

// Dot product of two unit vectors, i.e. their cosine similarity.
double cosine_affinity(const Embedding& a, const Embedding& b);

// Scores how strongly two disjoint path subsets of one document belong
// together; higher means "merge first". Models fall into two groups:
// embedding models answer through cosine similarity of embed(), and direct
// models (oracle, heuristic) compute the pairwise score themselves. Greedy
// inference only needs affinity(); it caches embeddings when available.
// Implementations must be immutable and thread-safe.
class AffinityModel {
public:
    virtual ~AffinityModel() = default;

    virtual double affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const = 0;

    virtual bool has_embedding() const { return false; }
    // Only valid when has_embedding(); throws std::logic_error otherwise.
    virtual Embedding embed(const VectorDocument& doc, const PathSet& subset) const;

    // Stable identity of the model's behavior (used as a cache key).
    virtual std::string fingerprint() const = 0;
};

class EmbeddingModel : public AffinityModel {
public:
    bool has_embedding() const final { return true; }
    double affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const final;
    Embedding embed(const VectorDocument& doc, const PathSet& subset) const override = 0;
};

// Ground-truth driven affinity: -|Leaves(g)| where g is the smallest
// ground-truth node covering both subsets. Every queried subset must be a
// union of sibling subtrees (or a whole subtree) of the ground truth;
// otherwise SubsetNotNested is thrown.
class OracleAffinity final : public AffinityModel {
public:
    explicit OracleAffinity(GroupTree ground_truth);

    double affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const override;
    std::string fingerprint() const override;

    const GroupTree& ground_truth() const { return gt_; }

private:
    NodeId covering_node(const PathSet& s) const;

    GroupTree gt_;
    std::string fingerprint_;
};

// Baseline: -(centroid distance) - color_weight * (HSV fill distance).
// Centroids are means of per-path box centers in unit-square coordinates.
// The color of a subset is the mean RGB of its paths' fills (strokes for
// unfilled paths); hue distance is circular. All distance terms lie in [0, 1]
// except the centroid distance, which is at most sqrt(2).
class HeuristicAffinity final : public AffinityModel {
public:
    explicit HeuristicAffinity(double color_weight = 0.5) : color_weight_(color_weight) {}

    double affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const override;
    std::string fingerprint() const override;

    double color_weight() const { return color_weight_; }

private:
    double color_weight_;
};

// HSV distance used by the heuristic, in [0, 1].
double hsv_distance(const Rgba& a, const Rgba& b);

// Precomputed embeddings keyed by subset_key(). Vectors are normalized on
// construction; lookups of absent keys throw UnknownSubset.
class EmbeddingTable final : public EmbeddingModel {
public:
    EmbeddingTable() = default;

    void insert(const PathSet& subset, std::span<const double> vector);
    Embedding embed(const VectorDocument& doc, const PathSet& subset) const override;
    std::string fingerprint() const override;

    std::size_t size() const { return table_.size(); }

    // JSON array of {subset_key, vector}; also accepts {"entries": [...]}.
    // Throws FormatError.
    static EmbeddingTable from_json(std::string_view text);
    std::string to_json() const;

private:
    std::map<std::string, Embedding, std::less<>> table_;
};

// FNV-1a over raw bytes; used for fingerprints.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

} // namespace vgroup
