#include "vgroup/synth.hpp"

#include "vgroup/errors.hpp"
#include "vgroup/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace vgroup {

using nlohmann::json;

std::string_view motif_name(Motif m) {
    switch (m) {
    case Motif::Flower: return "flower";
    case Motif::Face: return "face";
    case Motif::Frames: return "frames";
    case Motif::Dots: return "dots";
    }
    return "?";
}

Motif parse_motif(std::string_view name) {
    for (Motif m : {Motif::Flower, Motif::Face, Motif::Frames, Motif::Dots}) {
        if (motif_name(m) == name) return m;
    }
    throw InvalidSpec("unknown motif '" + std::string(name) + "'");
}

void SynthSpec::validate() const {
    if (n_groups < 1) throw InvalidSpec("n_groups must be at least 1");
    if (min_paths < 2 || max_paths < min_paths) throw InvalidSpec("paths_per_group must be [lo, hi] with 2 <= lo <= hi");
    if (motifs.empty()) throw InvalidSpec("motif set is empty");
    if (!(canvas_width > 0) || !(canvas_height > 0)) throw InvalidSpec("canvas must be positive");
    if (count < 1) throw InvalidSpec("count must be at least 1");
}

SynthSpec parse_synth_spec(std::string_view text) {
    SynthSpec s;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw InvalidSpec("synth spec: expected an object");
        for (const auto& [key, v] : j.items()) {
            if (key == "n_groups") {
                s.n_groups = v.get<int>();
            } else if (key == "paths_per_group") {
                const auto r = v.get<std::vector<int>>();
                if (r.size() != 2) throw InvalidSpec("synth spec: paths_per_group must be [lo, hi]");
                s.min_paths = r[0];
                s.max_paths = r[1];
            } else if (key == "motifs") {
                s.motifs.clear();
                for (const auto& name : v) s.motifs.push_back(parse_motif(name.get<std::string>()));
            } else if (key == "count") {
                s.count = v.get<int>();
            } else if (key == "canvas") {
                const auto c = v.get<std::vector<double>>();
                if (c.size() != 2) throw InvalidSpec("synth spec: canvas must be [w, h]");
                s.canvas_width = c[0];
                s.canvas_height = c[1];
            } else {
                throw InvalidSpec("synth spec: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw InvalidSpec(std::string("synth spec: ") + e.what());
    }
    s.validate();
    return s;
}

namespace {

// Ground-truth shape under construction: a path leaf or a group of parts.
struct Part {
    int path = -1;
    std::vector<Part> kids;
};

Part leaf(int p) { return Part{p, {}}; }

// Single-member groups collapse into their member; empty groups vanish.
Part group(std::vector<Part> kids) {
    std::erase_if(kids, [](const Part& k) { return k.path < 0 && k.kids.empty(); });
    if (kids.size() == 1) return std::move(kids.front());
    return Part{-1, std::move(kids)};
}

constexpr std::array<const char*, 7> kPalette{"#e63946", "#f4a261", "#e9c46a", "#2a9d8f",
                                              "#457b9d", "#6d597a", "#264653"};

class Scene {
public:
    explicit Scene(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64& rng() { return rng_; }

    const char* color() { return kPalette[integer(0, static_cast<int>(kPalette.size()) - 1)]; }

    int emit(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
        char buf[512];
        va_list args;
        va_start(args, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, args);
        va_end(args);
        body_ += "    ";
        body_ += buf;
        body_ += '\n';
        return next_path_++;
    }
    void raw(const std::string& s) { body_ += s; }

    int circle(double cx, double cy, double r) {
        return emit(R"svg(<circle cx="%.4f" cy="%.4f" r="%.4f" fill="%s"/>)svg", cx, cy, r, color());
    }

    const std::string& body() const { return body_; }

private:
    std::mt19937_64 rng_;
    std::string body_;
    int next_path_ = 0;
};

// Each motif draws exactly n paths centered at (cx, cy) within radius r.

Part flower(Scene& s, int n, double cx, double cy, double r) {
    const int disc = s.circle(cx, cy, 0.3 * r);
    std::vector<Part> petals;
    const double phase = s.uniform(0, 360);
    const int k = n - 1;
    for (int i = 0; i < k; ++i) {
        const double a = phase + 360.0 * i / k;
        const double t = a * std::numbers::pi / 180.0;
        const double px = cx + 0.65 * r * std::cos(t), py = cy + 0.65 * r * std::sin(t);
        petals.push_back(leaf(s.emit(
            R"svg(<ellipse cx="%.4f" cy="%.4f" rx="%.4f" ry="%.4f" transform="rotate(%.4f %.4f %.4f)" fill="%s"/>)svg", px,
            py, 0.33 * r, 0.14 * r, a, px, py, s.color())));
    }
    return group({leaf(disc), group(std::move(petals))});
}

Part face(Scene& s, int n, double cx, double cy, double r) {
    const int head = s.circle(cx, cy, r);
    int left = n - 1;
    std::vector<Part> eyes, spots, mouth;
    if (left != 1) {
        eyes.push_back(leaf(s.circle(cx - 0.38 * r, cy - 0.25 * r, 0.13 * r)));
        eyes.push_back(leaf(s.circle(cx + 0.38 * r, cy - 0.25 * r, 0.13 * r)));
        left -= 2;
    }
    if (left >= 1) {
        mouth.push_back(leaf(s.emit(
            R"svg(<path d="M %.4f %.4f Q %.4f %.4f %.4f %.4f" fill="none" stroke="%s" stroke-width="%.4f"/>)svg",
            cx - 0.4 * r, cy + 0.3 * r, cx, cy + 0.65 * r, cx + 0.4 * r, cy + 0.3 * r, s.color(), 0.05 * r)));
        --left;
    }
    const double side = s.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
    for (int i = 0; i < left; ++i) {
        const double sx = cx + side * s.uniform(0.45, 0.65) * r;
        const double sy = cy + s.uniform(0.0, 0.3) * r;
        spots.push_back(leaf(s.circle(sx, sy, 0.06 * r)));
    }
    return group({leaf(head), group({group(std::move(eyes)), group(std::move(mouth)), group(std::move(spots))})});
}

Part frames(Scene& s, int n, double cx, double cy, double r) {
    // Concentric squares shrinking towards a slightly drifting center.
    std::vector<int> ids;
    double half = r, x = cx, y = cy;
    for (int i = 0; i < n; ++i) {
        ids.push_back(s.emit(R"svg(<rect x="%.4f" y="%.4f" width="%.4f" height="%.4f" fill="%s"/>)svg", x - half, y - half,
                             2 * half, 2 * half, s.color()));
        const double next = half * s.uniform(0.55, 0.75);
        const double room = half - next;
        x += s.uniform(-0.3, 0.3) * room;
        y += s.uniform(-0.3, 0.3) * room;
        half = next;
    }
    Part chain = leaf(ids.back());
    for (int i = n - 2; i >= 0; --i) chain = group({leaf(ids[i]), std::move(chain)});
    return chain;
}

Part dots(Scene& s, int n, double cx, double cy, double r) {
    const int clusters = n >= 4 ? 2 : 1;
    std::vector<Part> out;
    const double tilt = s.uniform(0, std::numbers::pi);
    int placed = 0;
    for (int c = 0; c < clusters; ++c) {
        const int count = c == 0 ? n / clusters : n - placed;
        const double off = clusters == 1 ? 0.0 : (c == 0 ? -0.5 : 0.5) * r;
        const double ccx = cx + off * std::cos(tilt), ccy = cy + off * std::sin(tilt);
        std::vector<Part> members;
        for (int i = 0; i < count; ++i) {
            const double t = 2 * std::numbers::pi * (i + s.uniform(0, 0.5)) / count;
            const double d = s.uniform(0.15, 0.35) * r;
            members.push_back(leaf(s.circle(ccx + d * std::cos(t), ccy + d * std::sin(t), 0.09 * r)));
        }
        placed += count;
        out.push_back(group(std::move(members)));
    }
    return group(std::move(out));
}

Point center_of(const Part& p, const VectorDocument& doc) {
    BBox b;
    auto go = [&](auto&& self, const Part& x) -> void {
        if (x.path >= 0) b.extend(path_bbox(doc.paths[x.path]));
        for (const Part& k : x.kids) self(self, k);
    };
    go(go, p);
    return b.center();
}

// Rewrites every group with more than two members as nested pairs, joining
// the two members with the nearest bounding-box centers first (lowest
// indices on ties).
void binarize(Part& p, const VectorDocument& doc) {
    for (Part& k : p.kids) binarize(k, doc);
    if (p.kids.size() <= 2) return;
    std::vector<Part> open = std::move(p.kids);
    std::vector<Point> center;
    for (const Part& k : open) center.push_back(center_of(k, doc));
    while (open.size() > 2) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < open.size(); ++i) {
            for (std::size_t j = i + 1; j < open.size(); ++j) {
                const double d = std::hypot(center[i].x - center[j].x, center[i].y - center[j].y);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        Part joined{-1, {std::move(open[bi]), std::move(open[bj])}};
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(bj));
        center.erase(center.begin() + static_cast<std::ptrdiff_t>(bj));
        open[bi] = std::move(joined);
        center[bi] = center_of(open[bi], doc);
    }
    p.kids = std::move(open);
}

NodeId lower(const Part& p, std::vector<TreeNode>& nodes) {
    const NodeId id = static_cast<NodeId>(nodes.size());
    nodes.push_back({id, {}, std::nullopt});
    if (p.path >= 0) {
        nodes[id].path = p.path;
        return id;
    }
    for (const Part& k : p.kids) {
        const NodeId c = lower(k, nodes);
        nodes[id].children.push_back(c);
    }
    return id;
}

} // namespace

SynthGraphic synth_generate(std::uint64_t seed, const SynthSpec& spec) {
    spec.validate();
    Scene scene(seed);
    const double W = spec.canvas_width, H = spec.canvas_height;

    // Each half of the motifs is packed into a compact square region; the two
    // regions sit side by side or stacked with a clear gap between them.
    const bool side_by_side = scene.uniform(0, 1) < 0.5;
    const int halves = spec.n_groups > 1 ? 2 : 1;
    std::vector<std::vector<Part>> motifs(halves);
    for (int h = 0; h < halves; ++h) {
        const int count = h == 0 ? (spec.n_groups + 1) / 2 : spec.n_groups / 2;
        double rx = 0, ry = 0, rw = W, rh = H;
        if (halves == 2) {
            rw = 0.4 * W;
            rh = 0.4 * H;
            const double along = (h == 0 ? 0.0 : 0.55) + scene.uniform(0, 0.05);
            const double across = scene.uniform(0, 0.6);
            rx = (side_by_side ? along : across) * W;
            ry = (side_by_side ? across : along) * H;
        }
        const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count) * rw / rh)));
        const int rows = (count + cols - 1) / cols;
        const double cw = rw / cols, ch = rh / rows;
        std::vector<int> cells(static_cast<std::size_t>(cols) * rows);
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
        std::shuffle(cells.begin(), cells.end(), scene.rng());

        for (int g = 0; g < count; ++g) {
            const Motif kind = spec.motifs[scene.integer(0, static_cast<int>(spec.motifs.size()) - 1)];
            const int n = scene.integer(spec.min_paths, spec.max_paths);
            const int cell = cells[g];
            const double x0 = rx + (cell % cols) * cw, y0 = ry + (cell / cols) * ch;
            const double r = 0.5 * std::min(cw, ch) * scene.uniform(0.45, 0.9);
            const double cx = x0 + r + scene.uniform(0, cw - 2 * r);
            const double cy = y0 + r + scene.uniform(0, ch - 2 * r);
            scene.raw("  <g class=\"" + std::string(motif_name(kind)) + "\">\n");
            switch (kind) {
            case Motif::Flower: motifs[h].push_back(flower(scene, n, cx, cy, r)); break;
            case Motif::Face: motifs[h].push_back(face(scene, n, cx, cy, r)); break;
            case Motif::Frames: motifs[h].push_back(frames(scene, n, cx, cy, r)); break;
            case Motif::Dots: motifs[h].push_back(dots(scene, n, cx, cy, r)); break;
            }
            scene.raw("  </g>\n");
        }
    }

    char head[256];
    std::snprintf(head, sizeof head,
                  R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="%.4f" height="%.4f" viewBox="0 0 %.4f %.4f">)svg", W, H,
                  W, H);
    std::string svg = std::string(head) + "\n" + scene.body() + "</svg>\n";

    ParseOptions opts;
    opts.source_id = "synth-" + std::to_string(seed);
    VectorDocument doc = parse_document(svg, opts);

    std::vector<TreeNode> nodes;
    std::vector<Part> sides;
    for (auto& m : motifs) sides.push_back(group(std::move(m)));
    Part top = group(std::move(sides));
    binarize(top, doc);
    const NodeId root = lower(top, nodes);
    GroupTree tree(std::move(nodes), root);
    if (auto v = validate(tree, doc.size())) throw std::logic_error("synth_generate produced an invalid tree: " + v->message());
    return {std::move(svg), {std::move(doc), std::move(tree)}};
}

} // namespace vgroup
