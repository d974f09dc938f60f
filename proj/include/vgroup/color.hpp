#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace vgroup {

// Channels in [0, 1].
struct Rgba {
    double r = 0, g = 0, b = 0, a = 1;
    friend bool operator==(const Rgba&, const Rgba&) = default;
};

// h in degrees [0, 360), s and v in [0, 1].
struct Hsv {
    double h = 0, s = 0, v = 0;
};

Hsv rgb_to_hsv(const Rgba& c);
Rgba hsv_to_rgb(const Hsv& c, double alpha = 1.0);

// Parses an SVG paint value. Returns nullopt for "none"; throws
// MalformedInput for values that are not colors (including url(...) paint
// servers, which callers handle separately).
std::optional<Rgba> parse_color(std::string_view text);

// "#rrggbb" (alpha is carried separately in SVG output).
std::string to_hex(const Rgba& c);

} // namespace vgroup
