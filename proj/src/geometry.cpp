#include "vgroup/geometry.hpp"

#include <numbers>

namespace vgroup {

double distance_to_segment(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

Affine Affine::rotate_degrees(double deg) {
    const double r = deg * std::numbers::pi / 180.0;
    const double cs = std::cos(r);
    const double sn = std::sin(r);
    return {cs, sn, -sn, cs, 0, 0};
}

double Affine::max_scale() const {
    // Singular values of [[a c] [b d]] from the eigenvalues of M^T M.
    const double p = a * a + b * b;
    const double q = a * c + b * d;
    const double r = c * c + d * d;
    const double mean = 0.5 * (p + r);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (p - r) * (p - r) + q * q));
    return std::sqrt(mean + disc);
}

Affine Affine::operator*(const Affine& m) const {
    return {
        a * m.a + c * m.b,
        b * m.a + d * m.b,
        a * m.c + c * m.d,
        b * m.c + d * m.d,
        a * m.e + c * m.f + e,
        b * m.e + d * m.f + f,
    };
}

BBox bbox_of(std::span<const Point> pts) {
    BBox box;
    for (Point p : pts) box.extend(p);
    return box;
}

double polygon_area(std::span<const Point> ring) {
    if (ring.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
        twice += cross(ring[i], ring[(i + 1) % n]);
    }
    return 0.5 * std::abs(twice);
}

bool point_in_polygon(Point p, std::span<const Point> ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[i];
        const Point b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

} // namespace vgroup
