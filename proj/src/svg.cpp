#include "vgroup/svg.hpp"

#include "vgroup/errors.hpp"

#include <expat.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

namespace vgroup {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// Scanner for the number/flag grammar shared by path data, transforms,
// points lists and viewBox.
class NumberScanner {
public:
    explicit NumberScanner(std::string_view s) : s_(s) {}

    void skip_separators() {
        while (pos_ < s_.size() && (is_space(s_[pos_]) || s_[pos_] == ',')) ++pos_;
    }
    bool at_end() {
        skip_separators();
        return pos_ >= s_.size();
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char take() { return s_[pos_++]; }
    std::size_t pos() const { return pos_; }

    // SVG number: sign? (digits ("." digits?)? | "." digits) exponent?
    // Stops at a second '.' so "1.5.5" reads as 1.5 then .5.
    std::optional<double> number() {
        skip_separators();
        const std::size_t start = pos_;
        std::size_t i = pos_;
        if (i < s_.size() && (s_[i] == '+' || s_[i] == '-')) ++i;
        bool digits = false;
        while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i, digits = true;
        if (i < s_.size() && s_[i] == '.') {
            ++i;
            while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i, digits = true;
        }
        if (!digits) return std::nullopt;
        if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
            if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                i = j;
            }
        }
        std::size_t first = start;
        if (s_[first] == '+') ++first; // from_chars rejects a leading '+'
        double v = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + first, s_.data() + i, v);
        if (ec != std::errc{} || ptr != s_.data() + i) return std::nullopt;
        pos_ = i;
        return v;
    }

    // Arc flags may be packed without separators ("a1 1 0 0110 10").
    std::optional<bool> flag() {
        skip_separators();
        const char c = peek();
        if (c != '0' && c != '1') return std::nullopt;
        ++pos_;
        return c == '1';
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Length with an optional absolute unit. Percentages resolve against
// `percent_base` when given.
std::optional<double> parse_length(std::string_view text, std::optional<double> percent_base = std::nullopt) {
    text = trim(text);
    NumberScanner sc(text);
    const auto v = sc.number();
    if (!v) return std::nullopt;
    const std::string_view unit = trim(text.substr(sc.pos()));
    static const std::map<std::string_view, double> kUnits{
        {"", 1.0}, {"px", 1.0}, {"pt", 4.0 / 3.0}, {"pc", 16.0},
        {"mm", 96.0 / 25.4}, {"cm", 96.0 / 2.54}, {"in", 96.0},
    };
    if (unit == "%") {
        if (!percent_base) return std::nullopt;
        return *v / 100.0 * *percent_base;
    }
    const auto it = kUnits.find(unit);
    if (it == kUnits.end()) return std::nullopt;
    return *v * it->second;
}

struct Style {
    // SVG initial values; fill defaults to black, stroke to none.
    std::optional<Rgba> fill = Rgba{0, 0, 0, 1};
    std::optional<Rgba> stroke;
    double stroke_width = 1.0;
    double fill_opacity = 1.0;
    double opacity = 1.0; // product over ancestors
};

struct Context {
    Affine ctm;
    Style style;
};

constexpr std::array<std::string_view, 7> kDrawables{"path", "rect", "circle", "ellipse", "line", "polyline", "polygon"};

constexpr std::array<std::string_view, 10> kIgnoredPresentation{
    "class", "clip-path", "mask", "filter", "stroke-opacity", "fill-rule",
    "stroke-dasharray", "visibility", "display", "marker-end"};

bool is_drawable(std::string_view name) {
    return std::ranges::find(kDrawables, name) != kDrawables.end();
}

class SvgBuilder {
public:
    explicit SvgBuilder(const ParseOptions& opts) : opts_(opts) {}

    void start(std::string_view raw_name, const char** attrs) {
        std::string_view name = raw_name;
        if (name.starts_with("svg:")) name.remove_prefix(4);

        if (skip_depth_ > 0) {
            ++skip_depth_;
            return;
        }
        std::map<std::string, std::string, std::less<>> attr;
        for (int i = 0; attrs[i]; i += 2) attr[attrs[i]] = attrs[i + 1];

        if (!saw_root_) {
            saw_root_ = true;
            if (name != "svg") throw MalformedInput("root element is <" + std::string(name) + ">, expected <svg>");
            setup_viewport(attr);
            stack_.push_back(Context{root_, Style{}});
            return;
        }
        if (name == "g") {
            stack_.push_back(child_context(attr));
            return;
        }
        if (is_drawable(name)) {
            // Children of drawables (title, animate, ...) carry no geometry.
            const Context ctx = child_context(attr);
            emit(name, attr, ctx);
            ++skip_depth_;
            return;
        }
        warnings_.push_back("skipped unsupported element <" + std::string(raw_name) + ">");
        ++skip_depth_;
    }

    void end() {
        if (skip_depth_ > 0) {
            --skip_depth_;
            return;
        }
        if (!stack_.empty()) stack_.pop_back();
    }

    ParseResult finish() {
        if (!saw_root_) throw MalformedInput("no <svg> root element");
        if (doc_.paths.empty()) throw EmptyDocument("document contains no supported drawable elements");
        doc_.source_id = opts_.source_id;
        return {std::move(doc_), std::move(warnings_)};
    }

private:
    void setup_viewport(const std::map<std::string, std::string, std::less<>>& attr) {
        if (auto it = attr.find("viewBox"); it != attr.end()) {
            NumberScanner sc(it->second);
            std::array<double, 4> vb{};
            for (double& v : vb) {
                const auto n = sc.number();
                if (!n) throw MalformedInput("malformed viewBox '" + it->second + "'");
                v = *n;
            }
            if (!(vb[2] > 0 && vb[3] > 0)) throw MalformedInput("viewBox must have positive size");
            doc_.canvas_width = vb[2];
            doc_.canvas_height = vb[3];
            root_ = Affine::translate(-vb[0], -vb[1]);
        } else {
            std::optional<double> w, h;
            if (auto it = attr.find("width"); it != attr.end()) w = parse_length(it->second);
            if (auto it = attr.find("height"); it != attr.end()) h = parse_length(it->second);
            if (!w || !h || !(*w > 0) || !(*h > 0)) {
                throw MalformedInput("svg root has neither a viewBox nor absolute width/height");
            }
            doc_.canvas_width = *w;
            doc_.canvas_height = *h;
        }
        tolerance_ = opts_.tolerance.value_or(1e-3 * std::max(doc_.canvas_width, doc_.canvas_height));
        if (!(tolerance_ > 0)) throw std::invalid_argument("parse_svg: tolerance must be positive");
        if (!attr.contains("viewBox") && attr.contains("transform")) {
            warnings_.push_back("ignored transform on <svg> root");
        }
    }

    Context child_context(const std::map<std::string, std::string, std::less<>>& attr) {
        Context ctx = stack_.back();
        if (auto it = attr.find("transform"); it != attr.end()) {
            ctx.ctm = ctx.ctm * parse_transform(it->second, &warnings_);
        }
        // Presentation attributes first, then inline style overrides them.
        std::vector<std::pair<std::string, std::string>> props;
        for (std::string_view key : {"fill", "stroke", "stroke-width", "fill-opacity", "opacity"}) {
            if (auto it = attr.find(key); it != attr.end()) props.emplace_back(std::string(key), it->second);
        }
        for (std::string_view key : kIgnoredPresentation) {
            if (attr.contains(key)) warnings_.push_back("ignored attribute '" + std::string(key) + "'");
        }
        if (auto it = attr.find("style"); it != attr.end()) parse_style(it->second, props);
        double own_opacity = 1.0;
        for (const auto& [key, value] : props) apply_property(ctx, key, value, own_opacity);
        ctx.style.opacity *= own_opacity;
        return ctx;
    }

    void parse_style(std::string_view css, std::vector<std::pair<std::string, std::string>>& props) {
        std::size_t start = 0;
        while (start < css.size()) {
            std::size_t semi = css.find(';', start);
            if (semi == std::string_view::npos) semi = css.size();
            const std::string_view decl = css.substr(start, semi - start);
            start = semi + 1;
            const std::size_t colon = decl.find(':');
            if (colon == std::string_view::npos) continue;
            const std::string key(trim(decl.substr(0, colon)));
            const std::string value(trim(decl.substr(colon + 1)));
            if (key == "fill" || key == "stroke" || key == "stroke-width" || key == "fill-opacity" || key == "opacity") {
                props.emplace_back(key, value);
            } else if (!key.empty()) {
                warnings_.push_back("ignored style property '" + key + "'");
            }
        }
    }

    std::optional<Rgba> paint(std::string_view value, const std::optional<Rgba>& inherited, std::string_view what) {
        value = trim(value);
        if (value == "inherit") return inherited;
        if (value.starts_with("url(")) {
            warnings_.push_back("unsupported paint server for " + std::string(what) + " (" + std::string(value) + ")");
            return std::nullopt;
        }
        if (value == "currentColor") {
            warnings_.push_back("currentColor resolved to black");
            return Rgba{0, 0, 0, 1};
        }
        try {
            return parse_color(value);
        } catch (const MalformedInput& e) {
            warnings_.push_back(e.what());
            return inherited;
        }
    }

    void apply_property(Context& ctx, const std::string& key, const std::string& value, double& own_opacity) {
        if (key == "fill") {
            ctx.style.fill = paint(value, ctx.style.fill, "fill");
        } else if (key == "stroke") {
            ctx.style.stroke = paint(value, ctx.style.stroke, "stroke");
        } else if (key == "stroke-width") {
            if (trim(value) == "inherit") return;
            if (auto w = parse_length(value); w && *w >= 0) ctx.style.stroke_width = *w;
            else warnings_.push_back("ignored stroke-width '" + value + "'");
        } else if (key == "fill-opacity" || key == "opacity") {
            if (trim(value) == "inherit") return;
            NumberScanner sc(value);
            auto v = sc.number();
            if (!v) {
                warnings_.push_back("ignored " + key + " '" + value + "'");
                return;
            }
            const double clamped = std::clamp(*v, 0.0, 1.0);
            if (key == "fill-opacity") ctx.style.fill_opacity = clamped;
            else own_opacity = clamped;
        }
    }

    double length_attr(const std::map<std::string, std::string, std::less<>>& attr, std::string_view key,
                       double percent_base) {
        const auto it = attr.find(key);
        if (it == attr.end()) return 0.0;
        const auto v = parse_length(it->second, percent_base);
        if (!v) {
            warnings_.push_back("malformed length " + std::string(key) + "='" + it->second + "'");
            return 0.0;
        }
        return *v;
    }

    std::vector<Point> point_list(std::string_view text) {
        NumberScanner sc(text);
        std::vector<Point> pts;
        while (!sc.at_end()) {
            const auto x = sc.number();
            const auto y = sc.number();
            if (!x || !y) {
                warnings_.push_back("malformed points list");
                break;
            }
            pts.push_back({*x, *y});
        }
        return pts;
    }

    std::vector<Subpath> geometry(std::string_view name, const std::map<std::string, std::string, std::less<>>& attr) {
        const double w = doc_.canvas_width, h = doc_.canvas_height;
        const double diag = std::sqrt(0.5 * (w * w + h * h));
        auto get = [&](std::string_view key, double base) { return length_attr(attr, key, base); };
        std::vector<Subpath> out;

        if (name == "path") {
            const auto it = attr.find("d");
            if (it == attr.end()) return out;
            std::string error;
            out = parse_path_data(it->second, &error);
            if (!error.empty()) warnings_.push_back("path data: " + error);
        } else if (name == "rect") {
            const double x = get("x", w), y = get("y", h), rw = get("width", w), rh = get("height", h);
            if (!(rw > 0 && rh > 0)) return out;
            double rx = get("rx", w), ry = get("ry", h);
            if (!attr.contains("rx")) rx = ry;
            if (!attr.contains("ry")) ry = rx;
            rx = std::min(std::max(rx, 0.0), rw / 2);
            ry = std::min(std::max(ry, 0.0), rh / 2);
            Subpath sp{{}, true};
            if (rx > 0 && ry > 0) {
                const double pi = std::numbers::pi;
                auto corner = [&](double cx, double cy, double t0) {
                    sp.segments.push_back(ArcSegment{{cx, cy}, {rx, 0}, {0, ry}, t0, t0 + pi / 2});
                };
                sp.segments.push_back(LineSegment{{x + rx, y}, {x + rw - rx, y}});
                corner(x + rw - rx, y + ry, -pi / 2);
                sp.segments.push_back(LineSegment{{x + rw, y + ry}, {x + rw, y + rh - ry}});
                corner(x + rw - rx, y + rh - ry, 0);
                sp.segments.push_back(LineSegment{{x + rw - rx, y + rh}, {x + rx, y + rh}});
                corner(x + rx, y + rh - ry, pi / 2);
                sp.segments.push_back(LineSegment{{x, y + rh - ry}, {x, y + ry}});
                corner(x + rx, y + ry, pi);
            } else {
                const Point a{x, y}, b{x + rw, y}, c{x + rw, y + rh}, d{x, y + rh};
                sp.segments = {LineSegment{a, b}, LineSegment{b, c}, LineSegment{c, d}, LineSegment{d, a}};
            }
            out.push_back(std::move(sp));
        } else if (name == "circle" || name == "ellipse") {
            const double cx = get("cx", w), cy = get("cy", h);
            double rx = 0, ry = 0;
            if (name == "circle") {
                rx = ry = get("r", diag);
            } else {
                rx = get("rx", w);
                ry = get("ry", h);
            }
            if (!(rx > 0 && ry > 0)) return out;
            out.push_back(Subpath{{ArcSegment{{cx, cy}, {rx, 0}, {0, ry}, 0.0, 2 * std::numbers::pi}}, true});
        } else if (name == "line") {
            const Point a{get("x1", w), get("y1", h)}, b{get("x2", w), get("y2", h)};
            out.push_back(Subpath{{LineSegment{a, b}}, false});
        } else { // polyline, polygon
            const auto it = attr.find("points");
            if (it == attr.end()) return out;
            const std::vector<Point> pts = point_list(it->second);
            Subpath sp{{}, name == "polygon"};
            for (std::size_t i = 1; i < pts.size(); ++i) sp.segments.push_back(LineSegment{pts[i - 1], pts[i]});
            if (sp.closed && pts.size() > 2) sp.segments.push_back(LineSegment{pts.back(), pts.front()});
            if (!sp.segments.empty()) out.push_back(std::move(sp));
        }
        return out;
    }

    void emit(std::string_view name, const std::map<std::string, std::string, std::less<>>& attr, const Context& ctx) {
        const std::vector<Subpath> subpaths = geometry(name, attr);
        std::vector<std::vector<Point>> rings;
        std::vector<bool> closed_flags;
        for (const Subpath& sp : subpaths) {
            std::vector<Segment> transformed;
            transformed.reserve(sp.segments.size());
            for (const Segment& s : sp.segments) transformed.push_back(transform_segment(s, ctx.ctm));
            std::vector<Point> pts = flatten_curve(transformed, tolerance_);
            if (sp.closed && pts.size() > 2 && distance(pts.front(), pts.back()) <= closure_eps()) {
                pts.pop_back();
            }
            if (pts.size() < 2) continue;
            rings.push_back(std::move(pts));
            closed_flags.push_back(sp.closed);
        }
        if (rings.empty()) {
            warnings_.push_back("skipped degenerate <" + std::string(name) + ">");
            return;
        }

        PathElement p;
        p.index = doc_.size();
        if (rings.size() == 1) {
            p.polyline = std::move(rings.front());
            p.closed = closed_flags.front();
        } else {
            // Each closed ring repeats its start so that, with the implicit
            // closing edge, bridges between rings cancel under even-odd.
            p.closed = std::ranges::all_of(closed_flags, [](bool c) { return c; });
            for (std::size_t i = 0; i < rings.size(); ++i) {
                p.polyline.insert(p.polyline.end(), rings[i].begin(), rings[i].end());
                if (closed_flags[i]) p.polyline.push_back(rings[i].front());
            }
        }
        const double op = ctx.style.opacity;
        p.fill = ctx.style.fill;
        if (p.fill) p.fill->a = 1.0;
        p.stroke = ctx.style.stroke;
        if (p.stroke) p.stroke->a = op;
        p.fill_opacity = ctx.style.fill_opacity * op;
        p.stroke_width = ctx.style.stroke_width * std::sqrt(std::abs(ctx.ctm.determinant()));
        doc_.paths.push_back(std::move(p));
    }

    double closure_eps() const { return 1e-9 * std::max(doc_.canvas_width, doc_.canvas_height); }

    ParseOptions opts_;
    VectorDocument doc_;
    std::vector<std::string> warnings_;
    std::vector<Context> stack_;
    Affine root_;
    double tolerance_ = 1.0;
    int skip_depth_ = 0;
    bool saw_root_ = false;
};

struct ExpatDeleter {
    void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

struct CallbackState {
    SvgBuilder* builder;
    std::exception_ptr error;
    XML_Parser parser;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<CallbackState*>(user);
    try {
        st->builder->start(name, attrs);
    } catch (...) {
        st->error = std::current_exception();
        XML_StopParser(st->parser, XML_FALSE);
    }
}

void XMLCALL on_end(void* user, const XML_Char*) {
    static_cast<CallbackState*>(user)->builder->end();
}

} // namespace

std::vector<Subpath> parse_path_data(std::string_view d, std::string* error) {
    std::vector<Subpath> out;
    NumberScanner sc(d);
    Point cur{}, start{};
    Point last_ctrl{};
    char prev_cmd = 0;
    char cmd = 0;
    Subpath* current = nullptr;

    auto fail = [&](const std::string& msg) {
        if (error) *error = msg + " at offset " + std::to_string(sc.pos());
    };
    auto ensure_subpath = [&]() {
        if (!current) {
            out.push_back({});
            current = &out.back();
            start = cur;
        }
    };
    auto add = [&](Segment s) {
        ensure_subpath();
        current->segments.push_back(std::move(s));
    };

    while (!sc.at_end()) {
        const char c = sc.peek();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cmd = sc.take();
            if (!std::strchr("MmLlHhVvCcSsQqTtAaZz", cmd)) {
                fail(std::string("unknown command '") + cmd + "'");
                break;
            }
        } else if (cmd == 0) {
            fail("path data must start with a command");
            break;
        } else if (cmd == 'Z' || cmd == 'z') {
            fail("numbers after closepath");
            break;
        }
        const bool rel = std::islower(static_cast<unsigned char>(cmd));
        const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));

        auto num = [&]() -> std::optional<double> { return sc.number(); };
        auto pt = [&]() -> std::optional<Point> {
            auto x = num();
            auto y = x ? num() : std::nullopt;
            if (!y) return std::nullopt;
            return rel ? Point{cur.x + *x, cur.y + *y} : Point{*x, *y};
        };
        bool ok = true;
        switch (up) {
            case 'M': {
                auto p = pt();
                if (!(ok = p.has_value())) break;
                cur = *p;
                current = nullptr;
                ensure_subpath();
                // Subsequent coordinate pairs are implicit lineto.
                cmd = rel ? 'l' : 'L';
                break;
            }
            case 'L': {
                auto p = pt();
                if (!(ok = p.has_value())) break;
                add(LineSegment{cur, *p});
                cur = *p;
                break;
            }
            case 'H': {
                auto x = num();
                if (!(ok = x.has_value())) break;
                const Point p{rel ? cur.x + *x : *x, cur.y};
                add(LineSegment{cur, p});
                cur = p;
                break;
            }
            case 'V': {
                auto y = num();
                if (!(ok = y.has_value())) break;
                const Point p{cur.x, rel ? cur.y + *y : *y};
                add(LineSegment{cur, p});
                cur = p;
                break;
            }
            case 'C': {
                auto p1 = pt(), p2 = p1 ? pt() : std::nullopt, p3 = p2 ? pt() : std::nullopt;
                if (!(ok = p3.has_value())) break;
                add(CubicSegment{cur, *p1, *p2, *p3});
                last_ctrl = *p2;
                cur = *p3;
                break;
            }
            case 'S': {
                const char pu = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
                const Point p1 = (pu == 'C' || pu == 'S') ? 2.0 * cur - last_ctrl : cur;
                auto p2 = pt(), p3 = p2 ? pt() : std::nullopt;
                if (!(ok = p3.has_value())) break;
                add(CubicSegment{cur, p1, *p2, *p3});
                last_ctrl = *p2;
                cur = *p3;
                break;
            }
            case 'Q': {
                auto p1 = pt(), p2 = p1 ? pt() : std::nullopt;
                if (!(ok = p2.has_value())) break;
                add(QuadSegment{cur, *p1, *p2});
                last_ctrl = *p1;
                cur = *p2;
                break;
            }
            case 'T': {
                const char pu = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
                const Point p1 = (pu == 'Q' || pu == 'T') ? 2.0 * cur - last_ctrl : cur;
                auto p2 = pt();
                if (!(ok = p2.has_value())) break;
                add(QuadSegment{cur, p1, *p2});
                last_ctrl = p1;
                cur = *p2;
                break;
            }
            case 'A': {
                auto rx = num(), ry = rx ? num() : std::nullopt, rot = ry ? num() : std::nullopt;
                auto large = rot ? sc.flag() : std::nullopt;
                auto sweep = large ? sc.flag() : std::nullopt;
                auto p = sweep ? pt() : std::nullopt;
                if (!(ok = p.has_value())) break;
                add(svg_arc(cur, *rx, *ry, *rot, *large, *sweep, *p));
                cur = *p;
                break;
            }
            case 'Z': {
                if (current) {
                    if (!(cur == start)) current->segments.push_back(LineSegment{cur, start});
                    current->closed = true;
                }
                cur = start;
                current = nullptr;
                break;
            }
        }
        if (!ok) {
            fail(std::string("incomplete arguments for '") + cmd + "'");
            break;
        }
        prev_cmd = cmd;
    }
    std::erase_if(out, [](const Subpath& s) { return s.segments.empty(); });
    return out;
}

Affine parse_transform(std::string_view text, std::vector<std::string>* warnings) {
    Affine result;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (is_space(text[pos]) || text[pos] == ',')) ++pos;
        if (pos >= text.size()) break;
        const std::size_t open = text.find('(', pos);
        const std::size_t close = open == std::string_view::npos ? open : text.find(')', open);
        if (close == std::string_view::npos) {
            if (warnings) warnings->push_back("malformed transform '" + std::string(text) + "'");
            break;
        }
        const std::string_view fname = trim(text.substr(pos, open - pos));
        NumberScanner sc(text.substr(open + 1, close - open - 1));
        std::vector<double> args;
        while (auto v = sc.number()) args.push_back(*v);
        pos = close + 1;

        Affine m;
        bool known = true;
        if (fname == "matrix" && args.size() == 6) {
            m = {args[0], args[1], args[2], args[3], args[4], args[5]};
        } else if (fname == "translate" && (args.size() == 1 || args.size() == 2)) {
            m = Affine::translate(args[0], args.size() == 2 ? args[1] : 0.0);
        } else if (fname == "scale" && (args.size() == 1 || args.size() == 2)) {
            m = Affine::scale(args[0], args.size() == 2 ? args[1] : args[0]);
        } else if (fname == "rotate" && (args.size() == 1 || args.size() == 3)) {
            m = Affine::rotate_degrees(args[0]);
            if (args.size() == 3) {
                m = Affine::translate(args[1], args[2]) * m * Affine::translate(-args[1], -args[2]);
            }
        } else {
            known = false;
        }
        if (!known) {
            if (warnings) warnings->push_back("ignored transform function '" + std::string(fname) + "'");
            continue;
        }
        result = result * m;
    }
    return result;
}

ParseResult parse_svg(std::string_view svg_text, const ParseOptions& options) {
    SvgBuilder builder(options);
    std::unique_ptr<XML_ParserStruct, ExpatDeleter> parser(XML_ParserCreate(nullptr));
    if (!parser) throw std::bad_alloc();
    CallbackState state{&builder, nullptr, parser.get()};
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    const auto status = XML_Parse(parser.get(), svg_text.data(), static_cast<int>(svg_text.size()), XML_TRUE);
    if (state.error) std::rethrow_exception(state.error);
    if (status != XML_STATUS_OK) {
        throw MalformedInput(std::string("XML error: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                             " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
    }
    return builder.finish();
}

VectorDocument parse_document(std::string_view svg_text, const ParseOptions& options) {
    return parse_svg(svg_text, options).doc;
}

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string svg_color(const Rgba& c) {
    return "rgb(" + fmt_num(c.r * 100) + "%," + fmt_num(c.g * 100) + "%," + fmt_num(c.b * 100) + "%)";
}

} // namespace

std::string write_svg(const VectorDocument& doc) {
    std::ostringstream os;
    const std::string w = fmt_num(doc.canvas_width), h = fmt_num(doc.canvas_height);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h << "\" width=\"" << w
       << "\" height=\"" << h << "\">\n";
    for (const PathElement& p : doc.paths) {
        os << "  <path d=\"";
        for (std::size_t i = 0; i < p.polyline.size(); ++i) {
            os << (i == 0 ? "M" : " L") << fmt_num(p.polyline[i].x) << ' ' << fmt_num(p.polyline[i].y);
        }
        if (p.closed) os << " Z";
        os << "\" fill=\"" << (p.fill ? svg_color(*p.fill) : "none") << '"';
        os << " fill-opacity=\"" << fmt_num(p.fill_opacity) << '"';
        if (p.stroke) {
            os << " stroke=\"" << svg_color(*p.stroke) << "\" stroke-width=\"" << fmt_num(p.stroke_width) << '"';
        } else {
            os << " stroke=\"none\" stroke-width=\"" << fmt_num(p.stroke_width) << '"';
        }
        os << "/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace vgroup
