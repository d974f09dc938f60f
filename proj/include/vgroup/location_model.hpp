#pragma once

#include "vgroup/affinity.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace vgroup {

// Location encoder: NormBox (x, y, w, h) -> 128 -> 128 -> 64 with ReLU on the
// hidden layers and L2 normalization of the output. Parameters live in one
// flat buffer, layer by layer, each layer stored as a row-major weight matrix
// (out x in) followed by its bias.
class LocationModel final : public EmbeddingModel {
public:
    static constexpr std::array<int, 4> kDims{4, 128, 128, kEmbeddingDim};
    static constexpr int kLayers = 3;

    // All parameters zero.
    LocationModel();
    // He-normal weights (std = sqrt(2 / fan_in)), zero biases.
    static LocationModel kaiming(std::uint64_t seed);

    static std::size_t param_count();
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    std::span<double> weights(int layer);
    std::span<const double> weights(int layer) const;
    std::span<double> biases(int layer);
    std::span<const double> biases(int layer) const;

    Embedding embed(const VectorDocument& doc, const PathSet& subset) const override;
    Embedding embed_box(const NormBox& box) const;
    std::string fingerprint() const override;

    // Intermediate values of one forward pass, kept for backpropagation.
    struct Trace {
        std::array<double, 4> input{};
        std::vector<double> pre1, post1, pre2, post2, out;
        double out_norm = 0;
        Embedding embedding;
    };
    void forward(const NormBox& box, Trace& trace) const;
    // Adds d(loss)/d(params) to `grad` given d(loss)/d(embedding).
    void backward(const Trace& trace, std::span<const double> grad_embedding, std::span<double> grad) const;

    friend bool operator==(const LocationModel& a, const LocationModel& b) { return a.params_ == b.params_; }

private:
    static std::size_t weight_offset(int layer);
    static std::size_t bias_offset(int layer);

    std::vector<double> params_;
};

} // namespace vgroup
