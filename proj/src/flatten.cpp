#include "vgroup/flatten.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vgroup {

namespace {

constexpr int kMaxCubicDepth = 24;

void push_point(std::vector<Point>& out, Point p) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
}

CubicSegment elevate(const QuadSegment& q) {
    return {q.p0, q.p0 + (2.0 / 3.0) * (q.p1 - q.p0), q.p2 + (2.0 / 3.0) * (q.p1 - q.p2), q.p2};
}

// The curve lies in the convex hull of its control points, so if both inner
// control points are within `tol` of the chord, so is the whole curve.
void flatten_cubic(const CubicSegment& c, double tol, int depth, std::vector<Point>& out) {
    const double d1 = distance_to_segment(c.p1, c.p0, c.p3);
    const double d2 = distance_to_segment(c.p2, c.p0, c.p3);
    if (depth >= kMaxCubicDepth || std::max(d1, d2) <= tol) {
        push_point(out, c.p3);
        return;
    }
    const Point p01 = 0.5 * (c.p0 + c.p1);
    const Point p12 = 0.5 * (c.p1 + c.p2);
    const Point p23 = 0.5 * (c.p2 + c.p3);
    const Point p012 = 0.5 * (p01 + p12);
    const Point p123 = 0.5 * (p12 + p23);
    const Point mid = 0.5 * (p012 + p123);
    flatten_cubic({c.p0, p01, p012, mid}, tol, depth + 1, out);
    flatten_cubic({mid, p123, p23, c.p3}, tol, depth + 1, out);
}

void flatten_arc(const ArcSegment& arc, double tol, std::vector<Point>& out) {
    const double sweep = arc.t1 - arc.t0;
    if (sweep == 0.0) return;
    // Largest semi-axis of the (possibly sheared) ellipse.
    const Affine basis{arc.u.x, arc.u.y, arc.v.x, arc.v.y, 0, 0};
    const double radius = basis.max_scale();
    if (radius == 0.0) return;
    // Chord sagitta on the unit circle is 1 - cos(step/2); the affine image
    // scales it by at most `radius`.
    double step = std::numbers::pi / 2;
    if (tol < radius) step = std::min(step, 2.0 * std::acos(1.0 - tol / radius));
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(sweep) / step)));
    for (int i = 1; i < n; ++i) push_point(out, arc.at(arc.t0 + sweep * i / n));
    push_point(out, arc.at(arc.t1));
}

} // namespace

Point ArcSegment::at(double t) const {
    return center + std::cos(t) * u + std::sin(t) * v;
}

Point segment_start(const Segment& s) {
    return std::visit(
        [](const auto& seg) -> Point {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, LineSegment>) return seg.from;
            else if constexpr (std::is_same_v<T, ArcSegment>) return seg.at(seg.t0);
            else return seg.p0;
        },
        s);
}

Point segment_end(const Segment& s) {
    return std::visit(
        [](const auto& seg) -> Point {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, LineSegment>) return seg.to;
            else if constexpr (std::is_same_v<T, QuadSegment>) return seg.p2;
            else if constexpr (std::is_same_v<T, CubicSegment>) return seg.p3;
            else return seg.at(seg.t1);
        },
        s);
}

Segment transform_segment(const Segment& s, const Affine& m) {
    return std::visit(
        [&m](const auto& seg) -> Segment {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, LineSegment>) {
                return LineSegment{m.apply(seg.from), m.apply(seg.to)};
            } else if constexpr (std::is_same_v<T, QuadSegment>) {
                return QuadSegment{m.apply(seg.p0), m.apply(seg.p1), m.apply(seg.p2)};
            } else if constexpr (std::is_same_v<T, CubicSegment>) {
                return CubicSegment{m.apply(seg.p0), m.apply(seg.p1), m.apply(seg.p2), m.apply(seg.p3)};
            } else {
                return ArcSegment{m.apply(seg.center), m.apply_linear(seg.u), m.apply_linear(seg.v),
                                  seg.t0, seg.t1};
            }
        },
        s);
}

Segment svg_arc(Point from, double rx, double ry, double rotation_deg, bool large_arc, bool sweep,
                Point to) {
    rx = std::abs(rx);
    ry = std::abs(ry);
    if (rx == 0.0 || ry == 0.0 || from == to) return LineSegment{from, to};

    const double phi = rotation_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(phi), sn = std::sin(phi);
    const double dx = 0.5 * (from.x - to.x), dy = 0.5 * (from.y - to.y);
    const double x1 = cs * dx + sn * dy;
    const double y1 = -sn * dx + cs * dy;

    // Scale radii up when no ellipse fits through both endpoints.
    const double lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
    if (lambda > 1.0) {
        rx *= std::sqrt(lambda);
        ry *= std::sqrt(lambda);
    }
    const double num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
    const double den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
    double coef = std::sqrt(std::max(0.0, num / den));
    if (large_arc == sweep) coef = -coef;
    const double cxp = coef * rx * y1 / ry;
    const double cyp = -coef * ry * x1 / rx;
    const Point center{cs * cxp - sn * cyp + 0.5 * (from.x + to.x),
                       sn * cxp + cs * cyp + 0.5 * (from.y + to.y)};

    const double t0 = std::atan2((y1 - cyp) / ry, (x1 - cxp) / rx);
    double dt = std::atan2((-y1 - cyp) / ry, (-x1 - cxp) / rx) - t0;
    if (sweep && dt < 0) dt += 2 * std::numbers::pi;
    if (!sweep && dt > 0) dt -= 2 * std::numbers::pi;

    return ArcSegment{center, Point{rx * cs, rx * sn}, Point{-ry * sn, ry * cs}, t0, t0 + dt};
}

std::vector<Point> flatten_curve(const std::vector<Segment>& segments, double tolerance) {
    if (!(tolerance > 0)) throw std::invalid_argument("flatten_curve: tolerance must be positive");
    std::vector<Point> out;
    for (const Segment& seg : segments) {
        push_point(out, segment_start(seg));
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, LineSegment>) push_point(out, s.to);
                else if constexpr (std::is_same_v<T, QuadSegment>) flatten_cubic(elevate(s), tolerance, 0, out);
                else if constexpr (std::is_same_v<T, CubicSegment>) flatten_cubic(s, tolerance, 0, out);
                else flatten_arc(s, tolerance, out);
            },
            seg);
    }
    return out;
}

} // namespace vgroup
