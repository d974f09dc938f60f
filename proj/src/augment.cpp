#include "vgroup/augment.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace vgroup {

using nlohmann::json;

namespace {

double uniform(std::mt19937_64& rng, Range r) {
    if (r.lo == r.hi) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

BBox content_bbox(const VectorDocument& doc) {
    BBox b;
    for (const PathElement& p : doc.paths) b.extend(path_bbox(p));
    return b;
}

// Maps every point through `m`; stroke widths follow the uniform scale `s`.
VectorDocument transformed(const VectorDocument& doc, const Affine& m, double s) {
    VectorDocument out = doc;
    for (PathElement& p : out.paths) {
        for (Point& q : p.polyline) q = m.apply(q);
        p.stroke_width *= s;
    }
    return out;
}

} // namespace

AugmentConfig AugmentConfig::identity() {
    AugmentConfig c;
    c.p_rotate = c.p_no_fill = c.p_stroke_opacity = c.p_hsv = c.p_combine = 0.0;
    return c;
}

void AugmentConfig::validate() const {
    for (double p : {p_rotate, p_no_fill, p_stroke_opacity, p_hsv, p_combine}) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidConfig("augmentation probabilities must lie in [0, 1]");
    }
    for (const Range& r : {rotation_deg, stroke_factor, opacity_delta, hue_delta_deg, saturation_delta, value_delta}) {
        if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
            throw InvalidConfig("augmentation ranges must satisfy lo <= hi");
        }
    }
    if (stroke_factor.lo < 0) throw InvalidConfig("stroke factor must be non-negative");
}

AugmentConfig parse_augment_config(std::string_view text) {
    AugmentConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("augment config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("augment config: expected an object");
    try {
        for (const auto& [key, value] : j.items()) {
            auto range = [&](Range& r) {
                const auto v = value.get<std::vector<double>>();
                if (v.size() != 2) throw InvalidConfig("augment config: '" + key + "' must be [lo, hi]");
                r = {v[0], v[1]};
            };
            if (key == "p_rotate") c.p_rotate = value.get<double>();
            else if (key == "p_no_fill") c.p_no_fill = value.get<double>();
            else if (key == "p_stroke_opacity") c.p_stroke_opacity = value.get<double>();
            else if (key == "p_hsv") c.p_hsv = value.get<double>();
            else if (key == "p_combine") c.p_combine = value.get<double>();
            else if (key == "rotation_deg") range(c.rotation_deg);
            else if (key == "stroke_factor") range(c.stroke_factor);
            else if (key == "opacity_delta") range(c.opacity_delta);
            else if (key == "hue_delta_deg") range(c.hue_delta_deg);
            else if (key == "saturation_delta") range(c.saturation_delta);
            else if (key == "value_delta") range(c.value_delta);
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else throw InvalidConfig("augment config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("augment config: ") + e.what());
    }
    c.validate();
    return c;
}

VectorDocument rotate(const VectorDocument& doc, double degrees) {
    if (std::fmod(degrees, 360.0) == 0.0) return doc;
    const Point c{0.5 * doc.canvas_width, 0.5 * doc.canvas_height};
    const Affine m = Affine::translate(c.x, c.y) * Affine::rotate_degrees(degrees) * Affine::translate(-c.x, -c.y);
    VectorDocument out = transformed(doc, m, 1.0);

    const BBox b = content_bbox(out);
    const double slack = 1e-9 * std::max(doc.canvas_width, doc.canvas_height);
    double s = 1.0;
    auto limit = [&](double extent, double room) {
        if (extent > room + slack) s = std::min(s, room / extent);
    };
    limit(c.x - b.min_x, c.x);
    limit(b.max_x - c.x, doc.canvas_width - c.x);
    limit(c.y - b.min_y, c.y);
    limit(b.max_y - c.y, doc.canvas_height - c.y);
    if (s < 1.0) {
        const Affine shrink = Affine::translate(c.x, c.y) * Affine::scale(s, s) * Affine::translate(-c.x, -c.y);
        out = transformed(out, shrink, s);
    }
    return out;
}

VectorDocument no_fill(const VectorDocument& doc) {
    VectorDocument out = doc;
    const double width = 0.01 * std::max(doc.canvas_width, doc.canvas_height);
    for (PathElement& p : out.paths) {
        if (p.fill && !p.stroke) {
            p.stroke = p.fill;
            p.stroke_width = width;
        }
        p.fill.reset();
    }
    return out;
}

VectorDocument jitter_stroke_opacity(const VectorDocument& doc, std::mt19937_64& rng, const AugmentConfig& cfg) {
    VectorDocument out = doc;
    for (PathElement& p : out.paths) {
        const double factor = uniform(rng, cfg.stroke_factor);
        const double delta = uniform(rng, cfg.opacity_delta);
        p.stroke_width = std::max(0.0, p.stroke_width * factor);
        p.fill_opacity = std::clamp(p.fill_opacity + delta, 0.0, 1.0);
    }
    return out;
}

Rgba shift_hsv(const Rgba& c, double dh_deg, double ds, double dv) {
    Hsv h = rgb_to_hsv(c);
    h.h = std::fmod(h.h + dh_deg, 360.0);
    if (h.h < 0) h.h += 360.0;
    h.s = std::clamp(h.s + ds, 0.0, 1.0);
    h.v = std::clamp(h.v + dv, 0.0, 1.0);
    return hsv_to_rgb(h, c.a);
}

VectorDocument jitter_hsv(const VectorDocument& doc, std::mt19937_64& rng, const AugmentConfig& cfg) {
    const double dh = uniform(rng, cfg.hue_delta_deg);
    const double ds = uniform(rng, cfg.saturation_delta);
    const double dv = uniform(rng, cfg.value_delta);
    VectorDocument out = doc;
    for (PathElement& p : out.paths) {
        if (p.fill) p.fill = shift_hsv(*p.fill, dh, ds, dv);
    }
    return out;
}

LabeledGraphic combine(const LabeledGraphic& first, const LabeledGraphic& second, std::mt19937_64& rng) {
    const double W = first.doc.canvas_width;
    const double H = first.doc.canvas_height;
    const bool horizontal = W >= H;
    const double along = horizontal ? W : H;
    const double gutter = 0.05 * along;
    const double half = 0.5 * (along - gutter);

    // Target slots; the coin decides which graphic goes first.
    BBox slot[2];
    for (int i = 0; i < 2; ++i) {
        const double start = i == 0 ? 0.0 : half + gutter;
        if (horizontal) slot[i] = BBox{start, 0.0, start + half, H};
        else slot[i] = BBox{0.0, start, W, start + half};
    }
    const bool swap = coin(rng, 0.5);

    auto fit = [&](const VectorDocument& d, const BBox& target) {
        BBox src{0.0, 0.0, d.canvas_width, d.canvas_height};
        src.extend(content_bbox(d));
        const double s = std::min(target.width() / src.width(), target.height() / src.height());
        const Point from = src.center(), to = target.center();
        const Affine m = Affine::translate(to.x, to.y) * Affine::scale(s, s) * Affine::translate(-from.x, -from.y);
        return transformed(d, m, s);
    };
    const VectorDocument a = fit(first.doc, slot[swap ? 1 : 0]);
    const VectorDocument b = fit(second.doc, slot[swap ? 0 : 1]);

    VectorDocument doc;
    doc.canvas_width = W;
    doc.canvas_height = H;
    doc.source_id = first.doc.source_id + "+" + second.doc.source_id;
    doc.paths = a.paths;
    doc.paths.insert(doc.paths.end(), b.paths.begin(), b.paths.end());
    reindex(doc);

    const int n1 = first.doc.size();
    const int m1 = first.tree.size();
    const int m2 = second.tree.size();
    std::vector<TreeNode> nodes = first.tree.nodes();
    for (TreeNode n : second.tree.nodes()) {
        n.id += m1;
        for (NodeId& c : n.children) c += m1;
        if (n.path) *n.path += n1;
        nodes.push_back(std::move(n));
    }
    const NodeId root = m1 + m2;
    nodes.push_back({root, {first.tree.root(), second.tree.root() + m1}, std::nullopt});
    return {std::move(doc), GroupTree(std::move(nodes), root)};
}

LabeledGraphic augment_sample(std::span<const LabeledGraphic> dataset, std::mt19937_64& rng,
                              const AugmentConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("augment_sample: empty dataset");
    auto pick = [&]() -> const LabeledGraphic& {
        return dataset[std::uniform_int_distribution<std::size_t>(0, dataset.size() - 1)(rng)];
    };
    const LabeledGraphic& base = pick();
    return augment_from(base, dataset, rng, cfg);
}

LabeledGraphic augment_from(const LabeledGraphic& base, std::span<const LabeledGraphic> dataset, std::mt19937_64& rng,
                            const AugmentConfig& cfg) {
    auto pick = [&]() -> const LabeledGraphic& {
        if (dataset.empty()) return base;
        return dataset[std::uniform_int_distribution<std::size_t>(0, dataset.size() - 1)(rng)];
    };
    LabeledGraphic out = coin(rng, cfg.p_combine) ? combine(base, pick(), rng) : base;
    if (coin(rng, cfg.p_rotate)) out.doc = rotate(out.doc, uniform(rng, cfg.rotation_deg));
    if (coin(rng, cfg.p_no_fill)) out.doc = no_fill(out.doc);
    if (coin(rng, cfg.p_stroke_opacity)) out.doc = jitter_stroke_opacity(out.doc, rng, cfg);
    if (coin(rng, cfg.p_hsv)) out.doc = jitter_hsv(out.doc, rng, cfg);
    return out;
}

} // namespace vgroup
