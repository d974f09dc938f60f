#pragma once

#include "vgroup/document.hpp"
#include "vgroup/flatten.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vgroup {

struct ParseOptions {
    // Maximum chordal deviation in canvas units. Defaults to 1e-3 times the
    // longer canvas side.
    std::optional<double> tolerance;
    std::string source_id;
};

struct ParseResult {
    VectorDocument doc;
    // One entry per skipped element or ignored attribute value.
    std::vector<std::string> warnings;
};

// Parses the supported SVG subset: path, rect, circle, ellipse, line,
// polyline, polygon, and g. Group transforms and styles are composed onto the
// drawables and the groups themselves are discarded.
// Throws MalformedInput (bad XML, no svg root, no viewport) and
// EmptyDocument (no drawable element survived).
ParseResult parse_svg(std::string_view svg_text, const ParseOptions& options = {});

// parse_svg without the warnings.
VectorDocument parse_document(std::string_view svg_text, const ParseOptions& options = {});

struct Subpath {
    std::vector<Segment> segments;
    bool closed = false;
};

// Parses SVG path data into subpaths. Stops at the first syntax error and
// appends a message to `error` (if given), keeping what was parsed so far.
std::vector<Subpath> parse_path_data(std::string_view d, std::string* error = nullptr);

Affine parse_transform(std::string_view text, std::vector<std::string>* warnings = nullptr);

// Serializes a document as SVG with one <path> per PathElement. Parsing the
// result yields the same polylines and styles.
std::string write_svg(const VectorDocument& doc);

} // namespace vgroup
