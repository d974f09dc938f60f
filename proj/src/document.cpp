#include "vgroup/document.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace vgroup {

using nlohmann::json;

PathSet make_path_set(std::vector<int> indices) {
    std::ranges::sort(indices);
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

std::string subset_key(std::span<const int> sorted_indices) {
    std::string key;
    for (std::size_t i = 0; i < sorted_indices.size(); ++i) {
        if (i) key += '-';
        key += std::to_string(sorted_indices[i]);
    }
    return key;
}

Point normalize_point(const VectorDocument& doc, Point p) {
    const double side = std::max(doc.canvas_width, doc.canvas_height);
    const double off_x = 0.5 * (side - doc.canvas_width);
    const double off_y = 0.5 * (side - doc.canvas_height);
    return {(p.x + off_x) / side, (p.y + off_y) / side};
}

BBox path_bbox(const PathElement& path) { return bbox_of(path.polyline); }

NormBox normalize_bbox(const VectorDocument& doc, std::span<const int> subset) {
    if (subset.empty()) throw EmptySubset("normalize_bbox: empty path subset");
    BBox box;
    for (int idx : subset) {
        if (idx < 0 || idx >= doc.size()) throw std::out_of_range("normalize_bbox: path index out of range");
        box.extend(path_bbox(doc.paths[idx]));
    }
    const Point lo = normalize_point(doc, {box.min_x, box.min_y});
    const Point hi = normalize_point(doc, {box.max_x, box.max_y});
    const double x0 = std::clamp(lo.x, 0.0, 1.0), y0 = std::clamp(lo.y, 0.0, 1.0);
    const double x1 = std::clamp(hi.x, 0.0, 1.0), y1 = std::clamp(hi.y, 0.0, 1.0);
    return {x0, y0, x1 - x0, y1 - y0};
}

void reindex(VectorDocument& doc) {
    for (int i = 0; i < doc.size(); ++i) doc.paths[i].index = i;
}

namespace {

json color_json(const std::optional<Rgba>& c) {
    if (!c) return nullptr;
    return json::array({c->r, c->g, c->b, c->a});
}

std::optional<Rgba> color_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 4) throw FormatError("doc.json: color must be [r,g,b,a] or null");
    return Rgba{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

} // namespace

std::string to_doc_json(const VectorDocument& doc, int indent) {
    json paths = json::array();
    for (const PathElement& p : doc.paths) {
        json poly = json::array();
        for (Point pt : p.polyline) poly.push_back({pt.x, pt.y});
        paths.push_back({
            {"index", p.index},
            {"closed", p.closed},
            {"fill", color_json(p.fill)},
            {"stroke", color_json(p.stroke)},
            {"stroke_width", p.stroke_width},
            {"fill_opacity", p.fill_opacity},
            {"polyline", std::move(poly)},
        });
    }
    json out = {
        {"canvas", {{"w", doc.canvas_width}, {"h", doc.canvas_height}}},
        {"paths", std::move(paths)},
    };
    if (!doc.source_id.empty()) out["source_id"] = doc.source_id;
    return out.dump(indent);
}

VectorDocument parse_doc_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        VectorDocument doc;
        doc.canvas_width = j.at("canvas").at("w").get<double>();
        doc.canvas_height = j.at("canvas").at("h").get<double>();
        doc.source_id = j.value("source_id", std::string{});
        for (const json& pj : j.at("paths")) {
            PathElement p;
            p.index = pj.at("index").get<int>();
            p.closed = pj.at("closed").get<bool>();
            p.fill = color_from(pj.at("fill"));
            p.stroke = color_from(pj.at("stroke"));
            p.stroke_width = pj.at("stroke_width").get<double>();
            p.fill_opacity = pj.at("fill_opacity").get<double>();
            for (const json& pt : pj.at("polyline")) p.polyline.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            doc.paths.push_back(std::move(p));
        }
        return doc;
    } catch (const json::exception& e) {
        throw FormatError(std::string("doc.json: ") + e.what());
    }
}

} // namespace vgroup
