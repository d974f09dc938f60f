#include "oracles.hpp"

#include "vgroup/errors.hpp"
#include "vgroup/svg.hpp"

#include <doctest.h>

#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace vgroup;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(VGROUP_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string svg100(const std::string& body) {
    return R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">)" + body + "</svg>";
}

double perimeter(const std::vector<Point>& pts, bool closed) {
    double s = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) s += distance(pts[i - 1], pts[i]);
    if (closed) s += distance(pts.back(), pts.front());
    return s;
}

Point cubic_at(const CubicSegment& c, double t) {
    const double u = 1 - t;
    return (u * u * u) * c.p0 + (3 * u * u * t) * c.p1 + (3 * u * t * t) * c.p2 + (t * t * t) * c.p3;
}

double distance_to_polyline(Point p, const std::vector<Point>& line) {
    double best = 1e300;
    for (std::size_t i = 1; i < line.size(); ++i) best = std::min(best, distance_to_segment(p, line[i - 1], line[i]));
    return best;
}

} // namespace

TEST_CASE("a rect becomes one closed path through its four corners") {
    const auto doc = parse_document(svg100(R"(<rect x="10" y="10" width="30" height="30"/>)"));
    REQUIRE(doc.size() == 1);
    const auto& p = doc.paths[0];
    CHECK(p.closed);
    REQUIRE(p.polyline.size() == 4);
    const std::vector<Point> corners{{10, 10}, {40, 10}, {40, 40}, {10, 40}};
    CHECK(p.polyline == corners);
}

TEST_CASE("circle is closed and line is an open two-point path") {
    const auto doc = parse_document(svg100(R"(<circle cx="50" cy="50" r="20"/><line x1="0" y1="0" x2="10" y2="5"/>)"));
    REQUIRE(doc.size() == 2);
    CHECK(doc.paths[0].closed);
    CHECK_FALSE(doc.paths[1].closed);
    REQUIRE(doc.paths[1].polyline.size() == 2);
    CHECK(doc.paths[1].polyline[0] == Point{0, 0});
    CHECK(doc.paths[1].polyline[1] == Point{10, 5});
}

TEST_CASE("path count matches an independent tag scan of each fixture") {
    for (const char* name : {"scene.svg", "ten_paths.svg", "frames.svg", "two_paths.svg"}) {
        const std::string text = fixture(name);
        CAPTURE(name);
        CHECK(parse_document(text).size() == oracle::count_drawable_tags(text));
    }
}

TEST_CASE("unsupported elements are skipped with a warning that names them") {
    const auto res = parse_svg(fixture("scene.svg"));
    bool text_warned = false;
    for (const auto& w : res.warnings) text_warned |= w.find("text") != std::string::npos;
    CHECK(text_warned);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_document("<svg"), MalformedInput);
    CHECK_THROWS_AS(parse_document("<html/>"), MalformedInput);
    CHECK_THROWS_AS(parse_document(R"(<svg xmlns="http://www.w3.org/2000/svg"><rect width="1" height="1"/></svg>)"),
                    MalformedInput);
    CHECK_THROWS_AS(parse_document(svg100("<text>hi</text>")), EmptyDocument);
}

TEST_CASE("parsing is deterministic and keeps document order") {
    const std::string text = fixture("scene.svg");
    const auto a = parse_document(text);
    const auto b = parse_document(text);
    CHECK(a == b);
    for (int i = 0; i < a.size(); ++i) CHECK(a.paths[i].index == i);
    // The page background comes first and the trailing green path last.
    CHECK(a.paths.front().polyline.size() == 4);
    REQUIRE(a.paths.back().fill.has_value());
    CHECK(a.paths.back().fill->g > a.paths.back().fill->r);
}

TEST_CASE("group transforms and inline styles are composed onto drawables") {
    const auto doc = parse_document(svg100(
        R"svg(<g transform="translate(10 20)" fill="red"><g transform="scale(2)"><rect x="1" y="1" width="2" height="2" style="stroke:blue;stroke-width:3"/></g></g>)svg"));
    REQUIRE(doc.size() == 1);
    const auto& p = doc.paths[0];
    CHECK(p.polyline[0] == Point{12, 22});
    CHECK(p.polyline[2] == Point{16, 26});
    REQUIRE(p.fill);
    CHECK(*p.fill == Rgba{1, 0, 0, 1});
    REQUIRE(p.stroke);
    CHECK(*p.stroke == Rgba{0, 0, 1, 1});
    CHECK(p.stroke_width == doctest::Approx(6));
}

TEST_CASE("flattening a line yields its two endpoints") {
    for (double tol : {1e-6, 1e-2, 10.0}) {
        const auto pts = flatten_curve({LineSegment{{1, 2}, {5, -3}}}, tol);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0] == Point{1, 2});
        CHECK(pts[1] == Point{5, -3});
    }
    CHECK_THROWS_AS(flatten_curve({LineSegment{{0, 0}, {1, 1}}}, 0.0), std::invalid_argument);
}

TEST_CASE("unit circle perimeter at tolerance 1e-3 is within 0.5% of 2 pi") {
    const ArcSegment circle{{0, 0}, {1, 0}, {0, 1}, 0.0, 2 * std::numbers::pi};
    const auto pts = flatten_curve({circle}, 1e-3);
    CHECK(std::abs(perimeter(pts, false) - 2 * std::numbers::pi) < 0.005 * 2 * std::numbers::pi);
    const auto doc = parse_document(svg100(R"(<circle cx="50" cy="50" r="1"/>)"), {.tolerance = 1e-3, .source_id = ""});
    CHECK(std::abs(perimeter(doc.paths[0].polyline, true) - 2 * std::numbers::pi) < 0.005 * 2 * std::numbers::pi);
}

TEST_CASE("flattened cubic keeps its exact endpoints") {
    const auto pts = flatten_curve({CubicSegment{{0, 0}, {1, 0}, {1, 1}, {2, 1}}}, 1e-3);
    CHECK(pts.front() == Point{0, 0});
    CHECK(pts.back() == Point{2, 1});
}

TEST_CASE("flattened random cubics stay within tolerance of the curve") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-50, 50);
    for (int trial = 0; trial < 30; ++trial) {
        const CubicSegment c{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, {coord(rng), coord(rng)},
                             {coord(rng), coord(rng)}};
        const double tol = 0.05;
        const auto pts = flatten_curve({c}, tol);
        std::vector<Point> dense;
        for (int i = 0; i <= 20000; ++i) dense.push_back(cubic_at(c, i / 20000.0));
        double worst = 0;
        for (Point q : dense) worst = std::max(worst, distance_to_polyline(q, pts));
        for (std::size_t i = 1; i < pts.size(); ++i) {
            worst = std::max(worst, distance_to_polyline(0.5 * (pts[i - 1] + pts[i]), dense));
        }
        CHECK(worst <= tol * 1.01);
    }
}

TEST_CASE("arc commands follow the endpoint parameterization") {
    const auto sub = parse_path_data("M 0 0 A 10 10 0 0 1 20 0");
    REQUIRE(sub.size() == 1);
    const auto pts = flatten_curve(sub[0].segments, 1e-4);
    CHECK(distance(pts.front(), Point{0, 0}) < 1e-9);
    CHECK(distance(pts.back(), Point{20, 0}) < 1e-9);
    // Half circle of radius 10: the apex sits 10 units off the chord.
    double extreme = 0;
    for (Point p : pts) extreme = std::max(extreme, std::abs(p.y));
    CHECK(extreme == doctest::Approx(10).epsilon(1e-4));
}

TEST_CASE("path data errors keep the parsed prefix") {
    std::string err;
    const auto sub = parse_path_data("M0 0 L10 0 L10 10 X 5", &err);
    CHECK_FALSE(err.empty());
    REQUIRE(sub.size() == 1);
    CHECK(sub[0].segments.size() == 2);
}

TEST_CASE("normalize_bbox examples") {
    const auto doc = parse_document(svg100(R"(<rect x="10" y="10" width="30" height="30"/>)"));
    const std::vector<int> s{0};
    const NormBox b = normalize_bbox(doc, s);
    CHECK(b.x == doctest::Approx(0.1));
    CHECK(b.y == doctest::Approx(0.1));
    CHECK(b.w == doctest::Approx(0.3));
    CHECK(b.h == doctest::Approx(0.3));
    CHECK_THROWS_AS(normalize_bbox(doc, std::vector<int>{}), EmptySubset);
    CHECK_THROWS_AS(normalize_bbox(doc, std::vector<int>{3}), std::out_of_range);

    const auto full = parse_document(svg100(R"(<rect x="0" y="0" width="100" height="100"/><circle cx="50" cy="50" r="50"/>)"));
    const NormBox f = normalize_bbox(full, std::vector<int>{0, 1});
    CHECK(f.x >= 0);
    CHECK(f.y >= 0);
    CHECK(f.x + f.w <= 1);
    CHECK(f.y + f.h <= 1);
}

TEST_CASE("non-square canvases are centered on the shorter axis") {
    const auto doc = parse_document(R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 200 100"><rect x="0" y="0" width="200" height="100"/></svg>)");
    const NormBox b = normalize_bbox(doc, std::vector<int>{0});
    CHECK(b.x == doctest::Approx(0));
    CHECK(b.w == doctest::Approx(1));
    CHECK(b.y == doctest::Approx(0.25));
    CHECK(b.h == doctest::Approx(0.5));
}

TEST_CASE("union bbox equals a point scan over both paths") {
    const auto doc = parse_document(fixture("ten_paths.svg"));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> subset;
        for (int i = 0; i < doc.size(); ++i) {
            if (rng() % 2) subset.push_back(i);
        }
        if (subset.empty()) subset.push_back(0);
        const auto scan = oracle::point_scan_bbox(doc, subset);
        const Point lo = normalize_point(doc, {scan[0], scan[1]});
        const Point hi = normalize_point(doc, {scan[2], scan[3]});
        const NormBox b = normalize_bbox(doc, subset);
        CHECK(b.x == doctest::Approx(lo.x).epsilon(1e-12));
        CHECK(b.y == doctest::Approx(lo.y).epsilon(1e-12));
        CHECK(b.x + b.w == doctest::Approx(hi.x).epsilon(1e-12));
        CHECK(b.y + b.h == doctest::Approx(hi.y).epsilon(1e-12));
    }
}

TEST_CASE("each path's box contains all of its normalized points") {
    const auto doc = parse_document(fixture("scene.svg"));
    for (int i = 0; i < doc.size(); ++i) {
        const NormBox b = normalize_bbox(doc, std::vector<int>{i});
        for (Point p : doc.paths[i].polyline) {
            const Point q = normalize_point(doc, p);
            CHECK(q.x >= b.x - 1e-9);
            CHECK(q.y >= b.y - 1e-9);
            CHECK(q.x <= b.x + b.w + 1e-9);
            CHECK(q.y <= b.y + b.h + 1e-9);
        }
    }
}

TEST_CASE("colors") {
    CHECK(*parse_color("#ff0000") == Rgba{1, 0, 0, 1});
    CHECK(*parse_color("#0f0") == Rgba{0, 1, 0, 1});
    CHECK(*parse_color("blue") == Rgba{0, 0, 1, 1});
    CHECK_FALSE(parse_color("none").has_value());
    const Rgba c = *parse_color("rgb(255, 128, 0)");
    CHECK(c.g == doctest::Approx(128.0 / 255));
    CHECK_THROWS_AS(parse_color("url(#grad)"), MalformedInput);
    CHECK(to_hex({1, 0.5, 0, 1}) == "#ff8000");
}

TEST_CASE("doc.json and write_svg round-trip") {
    const auto doc = parse_document(fixture("scene.svg"));
    const auto back = parse_doc_json(to_doc_json(doc));
    CHECK(back.size() == doc.size());
    for (int i = 0; i < doc.size(); ++i) CHECK(back.paths[i].polyline == doc.paths[i].polyline);
    const auto again = parse_document(write_svg(doc));
    REQUIRE(again.size() == doc.size());
    for (int i = 0; i < doc.size(); ++i) {
        CHECK(again.paths[i].closed == doc.paths[i].closed);
        REQUIRE(again.paths[i].polyline.size() == doc.paths[i].polyline.size());
        for (std::size_t k = 0; k < doc.paths[i].polyline.size(); ++k) {
            CHECK(distance(again.paths[i].polyline[k], doc.paths[i].polyline[k]) < 1e-9);
        }
    }
}
