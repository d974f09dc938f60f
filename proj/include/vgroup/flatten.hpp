#pragma once

#include "vgroup/geometry.hpp"

#include <variant>
#include <vector>

namespace vgroup {

struct LineSegment {
    Point from, to;
};

struct QuadSegment {
    Point p0, p1, p2;
};

struct CubicSegment {
    Point p0, p1, p2, p3;
};

// Elliptical arc in parametric form: center + u*cos(t) + v*sin(t) for
// t in [t0, t1] (t1 may be less than t0). Affine images of SVG arcs stay in
// this form, which is why arcs are not stored in endpoint parameterization.
struct ArcSegment {
    Point center, u, v;
    double t0 = 0, t1 = 0;

    Point at(double t) const;
};

using Segment = std::variant<LineSegment, QuadSegment, CubicSegment, ArcSegment>;

Point segment_start(const Segment& s);
Point segment_end(const Segment& s);
Segment transform_segment(const Segment& s, const Affine& m);

// Converts an SVG endpoint-parameterized arc (the `A` command) to parametric
// form. Returns a line when a radius is zero, per the SVG implementation notes.
Segment svg_arc(Point from, double rx, double ry, double x_axis_rotation_deg, bool large_arc,
                bool sweep, Point to);

// Flattens a connected chain of segments into a polyline that starts and ends
// at the chain's endpoints and deviates from the true curve by at most
// `tolerance` (user units). Zero-length segments contribute no points.
// Throws std::invalid_argument when tolerance <= 0.
std::vector<Point> flatten_curve(const std::vector<Segment>& segments, double tolerance);

} // namespace vgroup
