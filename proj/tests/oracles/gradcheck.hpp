#pragma once

// Central finite differences of the mean batch InfoNCE loss, evaluated by a
// forward pass written here from the layer definitions (4 -> 128 -> 128 -> 64,
// ReLU, L2 normalization). A perturbed parameter only changes the units that
// depend on it, so each difference re-evaluates just those units.

#include "vgroup/location_model.hpp"
#include "vgroup/training.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace oracle {

struct GradCheckResult {
    double max_rel_error = 0;
    std::size_t worst_index = 0;
    double analytic = 0;
    double numeric = 0;
    // Parameters whose difference interval crosses a ReLU kink; the central
    // difference is not a derivative estimate there, so they are not compared.
    std::size_t kinks = 0;
};

class FiniteDifferenceLoss {
public:
    static constexpr int H = 128;
    static constexpr int D = 64;

    FiniteDifferenceLoss(const vgroup::LocationModel& model, std::span<const vgroup::BoxTriplet> batch,
                         double temperature)
        : tau_(temperature) {
        for (int l = 0; l < 3; ++l) {
            const auto w = model.weights(l);
            const auto b = model.biases(l);
            w_[l].assign(w.begin(), w.end());
            b_[l].assign(b.begin(), b.end());
        }
        for (const auto& t : batch) {
            for (const vgroup::NormBox& box : {t.ref, t.pos, t.neg}) units_.push_back(forward({box.x, box.y, box.w, box.h}));
        }
        base_out_.resize(units_.size());
        for (std::size_t i = 0; i < units_.size(); ++i) base_out_[i] = units_[i].out;
    }

    double loss() const { return loss_of(base_out_); }

    // d(loss)/d(parameter) by central differences; `layer` 0..2, `is_bias`
    // selects the bias vector, (row, col) indexes the weight matrix. Sets
    // `kink` when some pre-activation changes sign within the interval.
    double numeric(int layer, bool is_bias, int row, int col, double step, bool* kink = nullptr) const {
        std::vector<std::array<double, D>> plus(units_.size()), minus(units_.size());
        bool crossed = false;
        for (std::size_t i = 0; i < units_.size(); ++i) {
            plus[i] = perturbed(units_[i], layer, is_bias, row, col, step, crossed);
            minus[i] = perturbed(units_[i], layer, is_bias, row, col, -step, crossed);
        }
        if (kink) *kink = crossed;
        return (loss_of(plus) - loss_of(minus)) / (2 * step);
    }

private:
    struct Units {
        std::array<double, 4> x;
        std::array<double, H> pre1, post1, pre2, post2;
        std::array<double, D> out;
    };

    static double relu(double v) { return v > 0 ? v : 0.0; }

    double w(int l, int row, int col) const {
        const int in = l == 0 ? 4 : H;
        return w_[l][static_cast<std::size_t>(row) * in + col];
    }

    Units forward(std::array<double, 4> x) const {
        Units u{};
        u.x = x;
        for (int i = 0; i < H; ++i) {
            double s = b_[0][i];
            for (int j = 0; j < 4; ++j) s += w(0, i, j) * x[j];
            u.pre1[i] = s;
            u.post1[i] = relu(s);
        }
        for (int i = 0; i < H; ++i) {
            double s = b_[1][i];
            for (int j = 0; j < H; ++j) s += w(1, i, j) * u.post1[j];
            u.pre2[i] = s;
            u.post2[i] = relu(s);
        }
        for (int k = 0; k < D; ++k) {
            double s = b_[2][k];
            for (int j = 0; j < H; ++j) s += w(2, k, j) * u.post2[j];
            u.out[k] = s;
        }
        return u;
    }

    static bool flips(double before, double after) { return (before > 0) != (after > 0); }

    std::array<double, D> perturbed(const Units& u, int layer, bool is_bias, int row, int col, double d,
                                    bool& crossed) const {
        std::array<double, D> out = u.out;
        if (layer == 2) {
            out[row] += is_bias ? d : d * u.post2[col];
            return out;
        }
        if (layer == 1) {
            const double pre = u.pre2[row] + (is_bias ? d : d * u.post1[col]);
            crossed |= flips(u.pre2[row], pre);
            const double delta = relu(pre) - u.post2[row];
            for (int k = 0; k < D; ++k) out[k] += w(2, k, row) * delta;
            return out;
        }
        const double pre = u.pre1[row] + (is_bias ? d : d * u.x[col]);
        crossed |= flips(u.pre1[row], pre);
        const double delta1 = relu(pre) - u.post1[row];
        if (delta1 == 0) return out;
        for (int i = 0; i < H; ++i) {
            const double pre2 = u.pre2[i] + w(1, i, row) * delta1;
            crossed |= flips(u.pre2[i], pre2);
            const double delta2 = relu(pre2) - u.post2[i];
            if (delta2 == 0) continue;
            for (int k = 0; k < D; ++k) out[k] += w(2, k, i) * delta2;
        }
        return out;
    }

    static std::array<double, D> unit(const std::array<double, D>& v) {
        double n = 0;
        for (double x : v) n += x * x;
        n = std::sqrt(n);
        std::array<double, D> e{};
        if (n == 0) {
            e[0] = 1;
            return e;
        }
        for (int k = 0; k < D; ++k) e[k] = v[k] / n;
        return e;
    }

    double loss_of(const std::vector<std::array<double, D>>& outs) const {
        double total = 0;
        const std::size_t n = outs.size() / 3;
        for (std::size_t t = 0; t < n; ++t) {
            const auto r = unit(outs[3 * t]), p = unit(outs[3 * t + 1]), q = unit(outs[3 * t + 2]);
            double sp = 0, sn = 0;
            for (int k = 0; k < D; ++k) {
                sp += r[k] * p[k];
                sn += r[k] * q[k];
            }
            const double z = (sn - sp) / tau_;
            total += z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        }
        return total / static_cast<double>(n);
    }

    double tau_;
    std::array<std::vector<double>, 3> w_, b_;
    std::vector<Units> units_;
    std::vector<std::array<double, D>> base_out_;
};

// Compares the library's analytic gradient with finite differences for every
// parameter away from ReLU kinks. Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheckResult gradient_check(const vgroup::LocationModel& model, std::span<const vgroup::BoxTriplet> batch,
                                      double temperature, double step = 1e-5, double floor = 1e-6) {
    std::vector<double> grad(vgroup::LocationModel::param_count(), 0.0);
    vgroup::batch_loss(model, batch, temperature, &grad);
    const FiniteDifferenceLoss fd(model, batch, temperature);

    GradCheckResult res;
    std::size_t index = 0;
    const auto dims = vgroup::LocationModel::kDims;
    for (int l = 0; l < 3; ++l) {
        const int in = dims[l], out = dims[l + 1];
        auto compare = [&](double analytic, int r, int c, bool is_bias) {
            bool kink = false;
            const double numeric = fd.numeric(l, is_bias, r, c, step, &kink);
            if (kink) {
                ++res.kinks;
                ++index;
                return;
            }
            const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
            const double rel = std::abs(analytic - numeric) / denom;
            if (rel > res.max_rel_error) {
                res.max_rel_error = rel;
                res.worst_index = index;
                res.analytic = analytic;
                res.numeric = numeric;
            }
            ++index;
        };
        for (int r = 0; r < out; ++r) {
            for (int c = 0; c < in; ++c) compare(grad[index], r, c, false);
        }
        for (int r = 0; r < out; ++r) compare(grad[index], r, 0, true);
    }
    return res;
}

} // namespace oracle
