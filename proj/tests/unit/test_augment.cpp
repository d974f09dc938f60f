#include "oracles.hpp"

#include "vgroup/augment.hpp"
#include "vgroup/errors.hpp"
#include "vgroup/infer.hpp"
#include "vgroup/svg.hpp"
#include "vgroup/synth.hpp"

#include <doctest.h>

using namespace vgroup;

namespace {

LabeledGraphic three_squares() {
    auto doc = parse_document(R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">
        <rect x="10" y="10" width="20" height="20" fill="#c02020"/>
        <rect x="40" y="10" width="20" height="20" fill="#20c020" stroke="black" stroke-width="2"/>
        <rect x="10" y="60" width="30" height="30" fill="#2020c0" fill-opacity="0.5"/></svg>)");
    return {doc, deserialize("[[0,1],2]")};
}

void check_points_close(const VectorDocument& a, const VectorDocument& b, double eps) {
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        REQUIRE(a.paths[i].polyline.size() == b.paths[i].polyline.size());
        for (std::size_t k = 0; k < a.paths[i].polyline.size(); ++k) {
            CHECK(distance(a.paths[i].polyline[k], b.paths[i].polyline[k]) <= eps);
        }
    }
}

BBox content_box(const VectorDocument& doc, int from, int to) {
    BBox b;
    for (int i = from; i < to; ++i) b.extend(path_bbox(doc.paths[i]));
    return b;
}

} // namespace

TEST_CASE("rotation identities") {
    const auto g = synth_generate(3, SynthSpec{}).labeled;
    CHECK(rotate(g.doc, 0) == g.doc);
    check_points_close(rotate(g.doc, 360), g.doc, 1e-9);
    check_points_close(rotate(g.doc, -720), g.doc, 1e-9);
}

TEST_CASE("quarter turn about the canvas center") {
    VectorDocument doc;
    doc.canvas_width = doc.canvas_height = 100;
    doc.paths.push_back({0, {{10, 10}, {50, 50}}, false, std::nullopt, Rgba{0, 0, 0, 1}, 1.0, 1.0});
    const auto r = rotate(doc, 90);
    CHECK(distance(r.paths[0].polyline[0], Point{90, 10}) < 1e-9);
    CHECK(distance(r.paths[0].polyline[1], Point{50, 50}) < 1e-9);
}

TEST_CASE("rotated content stays on the canvas") {
    const auto g = three_squares();
    VectorDocument corner = g.doc;
    corner.paths[0].polyline = {{0, 0}, {100, 0}, {100, 100}, {0, 100}};
    for (double deg : {30.0, 45.0, 123.0}) {
        const auto r = rotate(corner, deg);
        const BBox b = content_box(r, 0, r.size());
        CHECK(b.min_x >= -1e-9);
        CHECK(b.min_y >= -1e-9);
        CHECK(b.max_x <= 100 + 1e-9);
        CHECK(b.max_y <= 100 + 1e-9);
    }
}

TEST_CASE("no_fill") {
    const auto g = three_squares();
    const auto out = no_fill(g.doc);
    REQUIRE(out.size() == 3);
    for (const auto& p : out.paths) CHECK_FALSE(p.fill.has_value());
    CHECK(out.paths[1].stroke == g.doc.paths[1].stroke);
    CHECK(out.paths[1].stroke_width == g.doc.paths[1].stroke_width);
    REQUIRE(out.paths[0].stroke.has_value());
    CHECK(*out.paths[0].stroke == *g.doc.paths[0].fill);
    CHECK(out.paths[0].stroke_width == doctest::Approx(1.0));
    CHECK(no_fill(out) == out);
    for (int i = 0; i < 3; ++i) CHECK(out.paths[i].polyline == g.doc.paths[i].polyline);
}

TEST_CASE("stroke and opacity jitter") {
    const auto g = three_squares();
    AugmentConfig cfg;
    cfg.stroke_factor = {1, 1};
    cfg.opacity_delta = {0, 0};
    std::mt19937_64 rng(1);
    CHECK(jitter_stroke_opacity(g.doc, rng, cfg) == g.doc);

    const AugmentConfig wide;
    std::mt19937_64 r1(9), r2(9);
    for (int i = 0; i < 10000; ++i) {
        const auto out = jitter_stroke_opacity(g.doc, r1, wide);
        for (const auto& p : out.paths) {
            CHECK(p.stroke_width >= 0);
            CHECK(p.fill_opacity >= 0);
            CHECK(p.fill_opacity <= 1);
        }
        if (i == 0) {
            CHECK(out == jitter_stroke_opacity(g.doc, r2, wide));
            for (int k = 0; k < 3; ++k) CHECK(out.paths[k].polyline == g.doc.paths[k].polyline);
        }
    }
}

TEST_CASE("hsv shifts") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 500; ++i) {
        const Rgba c{u(rng), u(rng), u(rng), 1};
        const Rgba same = shift_hsv(c, 0, 0, 0);
        const Rgba wrap = shift_hsv(c, 360, 0, 0);
        for (const Rgba& x : {same, wrap}) {
            CHECK(std::abs(x.r - c.r) < 1e-6);
            CHECK(std::abs(x.g - c.g) < 1e-6);
            CHECK(std::abs(x.b - c.b) < 1e-6);
        }
    }
    const Rgba green = shift_hsv({1, 0, 0, 1}, 120, 0, 0);
    CHECK(std::abs(green.r) < 1e-6);
    CHECK(std::abs(green.g - 1) < 1e-6);
    CHECK(std::abs(green.b) < 1e-6);
    const Rgba clamped = shift_hsv({0.5, 0.5, 0.5, 1}, 0, -1, 2);
    CHECK(clamped == Rgba{1, 1, 1, 1});

    AugmentConfig zero;
    zero.hue_delta_deg = zero.saturation_delta = zero.value_delta = {0, 0};
    const auto g = three_squares();
    const auto out = jitter_hsv(g.doc, rng, zero);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(out.paths[k].fill->r - g.doc.paths[k].fill->r) < 1e-6);
        CHECK(std::abs(out.paths[k].fill->b - g.doc.paths[k].fill->b) < 1e-6);
    }
}

TEST_CASE("combine") {
    const auto a = three_squares();
    const auto b = synth_generate(8, SynthSpec{}).labeled;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        std::mt19937_64 rng(seed);
        const LabeledGraphic c = combine(a, b, rng);
        const int n1 = a.doc.size(), n2 = b.doc.size();
        CHECK(c.doc.size() == n1 + n2);
        CHECK(c.tree.leaf_count() == n1 + n2);
        CHECK_FALSE(validate(c.tree, c.doc.size()).has_value());
        const auto& kids = c.tree.node(c.tree.root()).children;
        REQUIRE(kids.size() == 2);
        PathSet first, second;
        for (int i = 0; i < n1; ++i) first.push_back(i);
        for (int i = n1; i < n1 + n2; ++i) second.push_back(i);
        CHECK(c.tree.leaves_of(kids[0]) == first);
        CHECK(c.tree.leaves_of(kids[1]) == second);
        const BBox b1 = content_box(c.doc, 0, n1), b2 = content_box(c.doc, n1, n1 + n2);
        const bool apart = b1.max_x < b2.min_x || b2.max_x < b1.min_x || b1.max_y < b2.min_y || b2.max_y < b1.min_y;
        CHECK(apart);
        for (int i = 0; i < c.doc.size(); ++i) CHECK(c.doc.paths[i].index == i);
    }
}

TEST_CASE("augment_sample") {
    const std::vector<LabeledGraphic> data{three_squares(), synth_generate(4, SynthSpec{}).labeled};
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto s = augment_sample(data, rng, AugmentConfig::identity());
        CHECK(((s.doc == data[0].doc && s.tree == data[0].tree) || (s.doc == data[1].doc && s.tree == data[1].tree)));
    }
    AugmentConfig always;
    always.p_combine = 1;
    for (int i = 0; i < 20; ++i) {
        const auto s = augment_sample(data, rng, always);
        CHECK(s.tree.leaf_count() >= 2 * std::min(data[0].doc.size(), data[1].doc.size()));
        CHECK(s.tree.node(s.tree.root()).children.size() == 2);
        const int l = s.tree.leaves_of(s.tree.node(s.tree.root()).children[0]).size();
        const int r = s.tree.leaves_of(s.tree.node(s.tree.root()).children[1]).size();
        CHECK(l + r == s.doc.size());
    }
}

TEST_CASE("combination on a 2-graphic dataset sums the leaf counts") {
    const auto a = three_squares();
    const auto b = synth_generate(11, SynthSpec{}).labeled;
    const std::vector<LabeledGraphic> data{a, b};
    AugmentConfig only;
    only.p_rotate = only.p_no_fill = only.p_stroke_opacity = only.p_hsv = 0;
    only.p_combine = 1;
    std::mt19937_64 rng(6);
    bool saw_mixed = false;
    for (int i = 0; i < 50; ++i) {
        const auto s = augment_sample(data, rng, only);
        const int n = s.doc.size();
        CHECK((n == 2 * a.doc.size() || n == 2 * b.doc.size() || n == a.doc.size() + b.doc.size()));
        saw_mixed |= n == a.doc.size() + b.doc.size();
    }
    CHECK(saw_mixed);
}

TEST_CASE("1000 augmented samples stay valid") {
    std::vector<LabeledGraphic> data;
    for (int i = 0; i < 10; ++i) data.push_back(synth_generate(200 + i, SynthSpec{}).labeled);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto s = augment_sample(data, rng, AugmentConfig{});
        CHECK_FALSE(validate(s.tree, s.doc.size()).has_value());
        for (const auto& p : s.doc.paths) CHECK(p.polyline.size() >= 2);
    }
}

TEST_CASE("augment config parsing") {
    const auto c = parse_augment_config(R"({"p_hsv": 1, "rotation_deg": [-10, 10], "seed": 4})");
    CHECK(c.p_hsv == 1);
    CHECK(c.rotation_deg.lo == -10);
    CHECK(c.seed == 4);
    CHECK_THROWS_AS(parse_augment_config(R"({"p_hsv": -0.1})"), InvalidConfig);
    CHECK_THROWS_AS(parse_augment_config(R"({"rotation_deg": [10, -10]})"), InvalidConfig);
    CHECK_THROWS_AS(parse_augment_config(R"({"colour": 1})"), InvalidConfig);
}

TEST_CASE("synthetic minimal case") {
    SynthSpec spec;
    spec.n_groups = 1;
    spec.min_paths = spec.max_paths = 2;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = synth_generate(seed, spec).labeled;
        CHECK(g.doc.size() == 2);
        CHECK(g.tree.size() == 3);
    }
}

TEST_CASE("synthetic graphics are valid and deterministic") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = synth_generate(seed, SynthSpec{});
        CHECK(s.labeled.tree.leaf_count() == s.labeled.doc.size());
        CHECK(parse_document(s.svg).size() == oracle::count_drawable_tags(s.svg));
        CHECK_FALSE(validate(s.labeled.tree, s.labeled.doc.size()).has_value());
        const auto& t = s.labeled.tree;
        for (NodeId v = 0; v < t.size(); ++v) CHECK((t.is_leaf(v) || t.node(v).children.size() == 2));
        CHECK(t.leaves_of(t.node(t.root()).children[0]).size() >= 2);
    }
    CHECK(synth_generate(42, SynthSpec{}).svg == synth_generate(42, SynthSpec{}).svg);
    CHECK(synth_generate(42, SynthSpec{}).svg != synth_generate(43, SynthSpec{}).svg);
}

TEST_CASE("nested frames produce containment edges") {
    SynthSpec spec;
    spec.motifs = {Motif::Frames};
    spec.n_groups = 2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = synth_generate(seed, spec).labeled;
        const auto graph = containment_graph(g.doc);
        CHECK(graph.edge_count() > 0);
        // Every frame but the outermost of each motif sits in its enclosing frame.
        for (NodeId v = 0; v < g.tree.size(); ++v) {
            const auto& kids = g.tree.node(v).children;
            if (kids.size() != 2 || !g.tree.is_leaf(kids[0])) continue;
            const int outer = *g.tree.node(kids[0]).path;
            for (int p : g.tree.leaves_of(kids[1])) {
                bool nested = false;
                for (auto q = graph.parent_of[p]; q; q = graph.parent_of[*q]) nested |= *q == outer;
                CHECK(nested);
            }
        }
    }
}

TEST_CASE("synth spec parsing") {
    const auto s = parse_synth_spec(R"({"n_groups": 2, "paths_per_group": [2, 4], "motifs": ["face", "dots"], "canvas": [300, 200]})");
    CHECK(s.n_groups == 2);
    CHECK(s.min_paths == 2);
    CHECK(s.max_paths == 4);
    CHECK(s.motifs.size() == 2);
    CHECK(s.canvas_width == 300);
    CHECK_THROWS_AS(parse_synth_spec(R"({"n_groups": 0})"), InvalidSpec);
    CHECK_THROWS_AS(parse_synth_spec(R"({"motifs": ["tree"]})"), InvalidSpec);
    CHECK_THROWS_AS(parse_synth_spec(R"({"paths_per_group": [5, 2]})"), InvalidSpec);
    CHECK_THROWS_AS(parse_synth_spec("nope"), InvalidSpec);
}
