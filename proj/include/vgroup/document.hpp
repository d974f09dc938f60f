#pragma once

#include "vgroup/color.hpp"
#include "vgroup/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vgroup {

// Sorted, duplicate-free list of path indices.
using PathSet = std::vector<int>;

PathSet make_path_set(std::vector<int> indices);
// "0-3-7": the subset key used by embedding tables.
std::string subset_key(std::span<const int> sorted_indices);

struct PathElement {
    int index = 0;
    std::vector<Point> polyline; // user units, flattened outline
    bool closed = false;
    std::optional<Rgba> fill;
    std::optional<Rgba> stroke;
    double stroke_width = 1.0;
    double fill_opacity = 1.0;

    friend bool operator==(const PathElement&, const PathElement&) = default;
};

struct VectorDocument {
    double canvas_width = 0;
    double canvas_height = 0;
    std::vector<PathElement> paths; // document order; paths[i].index == i
    std::string source_id;

    int size() const { return static_cast<int>(paths.size()); }
    friend bool operator==(const VectorDocument&, const VectorDocument&) = default;
};

// Axis-aligned box in the unit square that encloses the canvas.
struct NormBox {
    double x = 0, y = 0, w = 0, h = 0;
    friend bool operator==(const NormBox&, const NormBox&) = default;
};

// Maps a canvas point into the unit square: both axes are divided by the
// longer canvas side and the shorter axis is centered. Not clamped.
Point normalize_point(const VectorDocument& doc, Point p);

// Tight box around the union of the subset's polylines, in unit-square
// coordinates, clamped to [0, 1]. Throws EmptySubset / std::out_of_range.
NormBox normalize_bbox(const VectorDocument& doc, std::span<const int> subset);

BBox path_bbox(const PathElement& path);

// Renumbers path indices to match positions; used after edits.
void reindex(VectorDocument& doc);

// Canonical doc.json dump: {canvas:{w,h}, paths:[{index, closed, fill,
// stroke, stroke_width, fill_opacity, polyline}]}. Colors are [r,g,b,a] or null.
std::string to_doc_json(const VectorDocument& doc, int indent = -1);
VectorDocument parse_doc_json(std::string_view text);

} // namespace vgroup
