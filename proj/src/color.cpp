#include "vgroup/color.hpp"

#include "vgroup/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace vgroup {

namespace {

struct NamedColor {
    std::string_view name;
    unsigned rgb;
};

// Subset of the CSS named colors; enough for hand-made and exported emoji art.
constexpr std::array<NamedColor, 48> kNamedColors{{
    {"aqua", 0x00ffff},      {"beige", 0xf5f5dc},      {"black", 0x000000},
    {"blue", 0x0000ff},      {"brown", 0xa52a2a},      {"chocolate", 0xd2691e},
    {"coral", 0xff7f50},     {"crimson", 0xdc143c},    {"cyan", 0x00ffff},
    {"darkblue", 0x00008b},  {"darkgray", 0xa9a9a9},   {"darkgreen", 0x006400},
    {"darkgrey", 0xa9a9a9},  {"darkred", 0x8b0000},    {"fuchsia", 0xff00ff},
    {"gold", 0xffd700},      {"gray", 0x808080},       {"green", 0x008000},
    {"grey", 0x808080},      {"indigo", 0x4b0082},     {"ivory", 0xfffff0},
    {"khaki", 0xf0e68c},     {"lavender", 0xe6e6fa},   {"lightblue", 0xadd8e6},
    {"lightgray", 0xd3d3d3}, {"lightgreen", 0x90ee90}, {"lightgrey", 0xd3d3d3},
    {"lime", 0x00ff00},      {"magenta", 0xff00ff},    {"maroon", 0x800000},
    {"navy", 0x000080},      {"olive", 0x808000},      {"orange", 0xffa500},
    {"orchid", 0xda70d6},    {"pink", 0xffc0cb},       {"plum", 0xdda0dd},
    {"purple", 0x800080},    {"red", 0xff0000},        {"salmon", 0xfa8072},
    {"sienna", 0xa0522d},    {"silver", 0xc0c0c0},     {"skyblue", 0x87ceeb},
    {"tan", 0xd2b48c},       {"teal", 0x008080},       {"tomato", 0xff6347},
    {"violet", 0xee82ee},    {"white", 0xffffff},      {"yellow", 0xffff00},
}};

Rgba from_packed(unsigned rgb) {
    return {((rgb >> 16) & 0xff) / 255.0, ((rgb >> 8) & 0xff) / 255.0, (rgb & 0xff) / 255.0, 1.0};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_color(std::string_view text) {
    throw MalformedInput("unsupported color value '" + std::string(text) + "'");
}

double parse_channel(std::string_view part, std::string_view whole) {
    part = trim(part);
    bool percent = false;
    if (!part.empty() && part.back() == '%') {
        percent = true;
        part.remove_suffix(1);
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) bad_color(whole);
    v = percent ? v / 100.0 : v / 255.0;
    return std::clamp(v, 0.0, 1.0);
}

} // namespace

Hsv rgb_to_hsv(const Rgba& c) {
    const double mx = std::max({c.r, c.g, c.b});
    const double mn = std::min({c.r, c.g, c.b});
    const double delta = mx - mn;
    Hsv out;
    out.v = mx;
    out.s = mx > 0 ? delta / mx : 0.0;
    if (delta <= 0) {
        out.h = 0;
    } else if (mx == c.r) {
        out.h = 60.0 * std::fmod((c.g - c.b) / delta, 6.0);
    } else if (mx == c.g) {
        out.h = 60.0 * ((c.b - c.r) / delta + 2.0);
    } else {
        out.h = 60.0 * ((c.r - c.g) / delta + 4.0);
    }
    if (out.h < 0) out.h += 360.0;
    return out;
}

Rgba hsv_to_rgb(const Hsv& in, double alpha) {
    double h = std::fmod(in.h, 360.0);
    if (h < 0) h += 360.0;
    const double s = std::clamp(in.s, 0.0, 1.0);
    const double v = std::clamp(in.v, 0.0, 1.0);
    const double chroma = v * s;
    const double hp = h / 60.0;
    const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = chroma, g = x; break;
        case 1: r = x, g = chroma; break;
        case 2: g = chroma, b = x; break;
        case 3: g = x, b = chroma; break;
        case 4: r = x, b = chroma; break;
        default: r = chroma, b = x; break;
    }
    const double m = v - chroma;
    return {r + m, g + m, b + m, alpha};
}

std::optional<Rgba> parse_color(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) bad_color(text);
    if (s == "none" || s == "transparent") return std::nullopt;
    if (s.front() == '#') {
        const std::string_view hex = s.substr(1);
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
        if (ec != std::errc{} || ptr != hex.data() + hex.size()) bad_color(text);
        if (hex.size() == 3) {
            const unsigned r = (value >> 8) & 0xf, g = (value >> 4) & 0xf, b = value & 0xf;
            return from_packed((r * 17) << 16 | (g * 17) << 8 | (b * 17));
        }
        if (hex.size() == 6) return from_packed(value);
        bad_color(text);
    }
    if (s.starts_with("rgb(") && s.back() == ')') {
        const std::string_view body = s.substr(4, s.size() - 5);
        std::array<double, 3> ch{};
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i) {
            const std::size_t comma = body.find(',', start);
            if ((i < 2) == (comma == std::string_view::npos)) bad_color(text);
            ch[i] = parse_channel(body.substr(start, comma - start), text);
            start = comma + 1;
        }
        return Rgba{ch[0], ch[1], ch[2], 1.0};
    }
    std::string lower(s);
    std::ranges::transform(lower, lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& named : kNamedColors) {
        if (named.name == lower) return from_packed(named.rgb);
    }
    bad_color(text);
}

std::string to_hex(const Rgba& c) {
    auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
    return buf;
}

} // namespace vgroup
