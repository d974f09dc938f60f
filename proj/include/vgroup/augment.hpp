#pragma once

#include "vgroup/document.hpp"
#include "vgroup/tree.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace vgroup {

struct LabeledGraphic {
    VectorDocument doc;
    GroupTree tree;
};

// A closed interval [lo, hi].
struct Range {
    double lo = 0, hi = 0;
};

struct AugmentConfig {
    double p_rotate = 0.3;
    double p_no_fill = 0.3;
    double p_stroke_opacity = 0.3;
    double p_hsv = 0.3;
    double p_combine = 0.2;

    Range rotation_deg{-180, 180};
    Range stroke_factor{0.5, 2.0};
    Range opacity_delta{-0.3, 0.3};
    Range hue_delta_deg{-36, 36};
    Range saturation_delta{-0.2, 0.2};
    Range value_delta{-0.2, 0.2};

    std::uint64_t seed = 0;

    // Every probability zero.
    static AugmentConfig identity();

    // Throws InvalidConfig.
    void validate() const;
};

// Config JSON: any subset of the fields above. Ranges are [lo, hi] arrays.
// Unknown keys are rejected. Throws InvalidConfig.
AugmentConfig parse_augment_config(std::string_view json_text);

// The single-graphic augmentations below never touch the tree, so they only
// return the new document.

// Rotates every point by `degrees` about the canvas center. If the rotated
// content leaves the canvas it is shrunk uniformly about the center until it
// fits again.
VectorDocument rotate(const VectorDocument& doc, double degrees);

// Clears every fill. Filled paths without a stroke get a stroke in the former
// fill color, 1% of the longer canvas side wide.
VectorDocument no_fill(const VectorDocument& doc);

// Scales each stroke width by a random factor and shifts each fill opacity by
// a random delta (clamped to [0, 1]).
VectorDocument jitter_stroke_opacity(const VectorDocument& doc, std::mt19937_64& rng, const AugmentConfig& cfg);

// Shifts all fills of the document by one random HSV offset: hue wraps, s and
// v are clamped.
VectorDocument jitter_hsv(const VectorDocument& doc, std::mt19937_64& rng, const AugmentConfig& cfg);
// Deterministic form used by jitter_hsv.
Rgba shift_hsv(const Rgba& c, double dh_deg, double ds, double dv);

// Lays both graphics side by side on a canvas the size of the first one,
// split along the longer axis with a 5% gutter, each scaled to fit its half.
// A coin flip picks which half each graphic takes. Path indices of the second
// graphic follow those of the first; the trees hang under a new root.
LabeledGraphic combine(const LabeledGraphic& first, const LabeledGraphic& second, std::mt19937_64& rng);

// Draws a base sample and applies each augmentation independently with its
// probability. Combination draws a second base sample.
LabeledGraphic augment_sample(std::span<const LabeledGraphic> dataset, std::mt19937_64& rng,
                              const AugmentConfig& cfg);
// augment_sample with a given base; the combination partner is drawn from
// `dataset` (or is the base itself when the dataset is empty).
LabeledGraphic augment_from(const LabeledGraphic& base, std::span<const LabeledGraphic> dataset, std::mt19937_64& rng,
                            const AugmentConfig& cfg);

} // namespace vgroup
