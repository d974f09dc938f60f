#include "vgroup/location_model.hpp"

#include <cmath>
#include <random>

namespace vgroup {

namespace {

constexpr std::size_t layer_size(int l) {
    return static_cast<std::size_t>(LocationModel::kDims[l + 1]) * (LocationModel::kDims[l] + 1);
}

// y = W x + b for one layer.
void affine(std::span<const double> w, std::span<const double> b, const double* x, int in, double* y) {
    const int out = static_cast<int>(b.size());
    for (int o = 0; o < out; ++o) {
        const double* row = w.data() + static_cast<std::size_t>(o) * in;
        double s = b[o];
        for (int i = 0; i < in; ++i) s += row[i] * x[i];
        y[o] = s;
    }
}

} // namespace

LocationModel::LocationModel() : params_(param_count(), 0.0) {}

std::size_t LocationModel::param_count() {
    std::size_t n = 0;
    for (int l = 0; l < kLayers; ++l) n += layer_size(l);
    return n;
}

std::size_t LocationModel::weight_offset(int layer) {
    std::size_t off = 0;
    for (int l = 0; l < layer; ++l) off += layer_size(l);
    return off;
}

std::size_t LocationModel::bias_offset(int layer) {
    return weight_offset(layer) + static_cast<std::size_t>(kDims[layer + 1]) * kDims[layer];
}

std::span<double> LocationModel::weights(int layer) {
    return {params_.data() + weight_offset(layer), static_cast<std::size_t>(kDims[layer + 1]) * kDims[layer]};
}
std::span<const double> LocationModel::weights(int layer) const {
    return {params_.data() + weight_offset(layer), static_cast<std::size_t>(kDims[layer + 1]) * kDims[layer]};
}
std::span<double> LocationModel::biases(int layer) {
    return {params_.data() + bias_offset(layer), static_cast<std::size_t>(kDims[layer + 1])};
}
std::span<const double> LocationModel::biases(int layer) const {
    return {params_.data() + bias_offset(layer), static_cast<std::size_t>(kDims[layer + 1])};
}

LocationModel LocationModel::kaiming(std::uint64_t seed) {
    LocationModel m;
    std::mt19937_64 rng(seed);
    for (int l = 0; l < kLayers; ++l) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / kDims[l]));
        for (double& w : m.weights(l)) w = dist(rng);
    }
    return m;
}

void LocationModel::forward(const NormBox& box, Trace& t) const {
    t.input = {box.x, box.y, box.w, box.h};
    t.pre1.resize(kDims[1]);
    t.post1.resize(kDims[1]);
    t.pre2.resize(kDims[2]);
    t.post2.resize(kDims[2]);
    t.out.resize(kDims[3]);

    affine(weights(0), biases(0), t.input.data(), kDims[0], t.pre1.data());
    for (int i = 0; i < kDims[1]; ++i) t.post1[i] = t.pre1[i] > 0 ? t.pre1[i] : 0.0;
    affine(weights(1), biases(1), t.post1.data(), kDims[1], t.pre2.data());
    for (int i = 0; i < kDims[2]; ++i) t.post2[i] = t.pre2[i] > 0 ? t.pre2[i] : 0.0;
    affine(weights(2), biases(2), t.post2.data(), kDims[2], t.out.data());

    double s = 0;
    for (double v : t.out) s += v * v;
    t.out_norm = std::sqrt(s);
    t.embedding = normalized(t.out);
}

void LocationModel::backward(const Trace& t, std::span<const double> gy, std::span<double> grad) const {
    const int d3 = kDims[3], d2 = kDims[2], d1 = kDims[1];
    // Through y = z / |z|: dz = (gy - y (y . gy)) / |z|. At z = 0 the output is
    // a constant, so the gradient vanishes.
    std::vector<double> dz3(d3, 0.0);
    if (t.out_norm > 0) {
        const auto& y = t.embedding.values;
        double proj = 0;
        for (int i = 0; i < d3; ++i) proj += y[i] * gy[i];
        for (int i = 0; i < d3; ++i) dz3[i] = (gy[i] - y[i] * proj) / t.out_norm;
    }

    auto layer_grad = [&](int l, const std::vector<double>& dz, const double* x, std::vector<double>* dx) {
        const int out = kDims[l + 1], in = kDims[l];
        double* gw = grad.data() + weight_offset(l);
        double* gb = grad.data() + bias_offset(l);
        const double* w = params_.data() + weight_offset(l);
        if (dx) dx->assign(in, 0.0);
        for (int o = 0; o < out; ++o) {
            const double g = dz[o];
            if (g == 0.0) continue;
            gb[o] += g;
            double* gw_row = gw + static_cast<std::size_t>(o) * in;
            const double* w_row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) gw_row[i] += g * x[i];
            if (dx) {
                for (int i = 0; i < in; ++i) (*dx)[i] += g * w_row[i];
            }
        }
    };

    std::vector<double> dh2, dh1;
    layer_grad(2, dz3, t.post2.data(), &dh2);
    for (int i = 0; i < d2; ++i) {
        if (!(t.pre2[i] > 0)) dh2[i] = 0.0;
    }
    layer_grad(1, dh2, t.post1.data(), &dh1);
    for (int i = 0; i < d1; ++i) {
        if (!(t.pre1[i] > 0)) dh1[i] = 0.0;
    }
    layer_grad(0, dh1, t.input.data(), nullptr);
}

Embedding LocationModel::embed_box(const NormBox& box) const {
    Trace t;
    forward(box, t);
    return t.embedding;
}

Embedding LocationModel::embed(const VectorDocument& doc, const PathSet& subset) const {
    return embed_box(normalize_bbox(doc, subset));
}

std::string LocationModel::fingerprint() const {
    const std::string_view bytes(reinterpret_cast<const char*>(params_.data()), params_.size() * sizeof(double));
    return "location:" + hex64(fnv1a(bytes));
}

} // namespace vgroup
