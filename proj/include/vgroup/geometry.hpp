#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace vgroup {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Distance from p to the closed segment [a, b].
double distance_to_segment(Point p, Point a, Point b);

// 2D affine map  [a c e; b d f; 0 0 1], the SVG matrix(a,b,c,d,e,f) layout.
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    static Affine translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
    static Affine scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
    static Affine rotate_degrees(double deg);

    Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
    // Applies only the linear part (for direction vectors).
    Point apply_linear(Point p) const { return {a * p.x + c * p.y, b * p.x + d * p.y}; }

    double determinant() const { return a * d - b * c; }
    // Largest singular value of the linear part.
    double max_scale() const;

    // (*this) * rhs: rhs is applied first.
    Affine operator*(const Affine& rhs) const;
};

struct BBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    bool empty() const { return min_x > max_x || min_y > max_y; }
    double width() const { return empty() ? 0.0 : max_x - min_x; }
    double height() const { return empty() ? 0.0 : max_y - min_y; }
    Point center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }

    void extend(Point p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    void extend(const BBox& o) {
        if (o.empty()) return;
        extend(Point{o.min_x, o.min_y});
        extend(Point{o.max_x, o.max_y});
    }
    bool contains(Point p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    bool overlaps(const BBox& o) const {
        return !(o.min_x > max_x || o.max_x < min_x || o.min_y > max_y || o.max_y < min_y);
    }
};

BBox bbox_of(std::span<const Point> pts);

// Absolute shoelace area of the polygon obtained by connecting the last
// point back to the first.
double polygon_area(std::span<const Point> ring);

// Even-odd point-in-polygon test over the implicitly closed ring.
bool point_in_polygon(Point p, std::span<const Point> ring);

} // namespace vgroup
