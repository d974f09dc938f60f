#pragma once

#include "vgroup/augment.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vgroup {

enum class Motif { Flower, Face, Frames, Dots };

std::string_view motif_name(Motif m);
// Throws InvalidSpec for unknown names.
Motif parse_motif(std::string_view name);

struct SynthSpec {
    int n_groups = 4;
    int min_paths = 3; // per group
    int max_paths = 7;
    std::vector<Motif> motifs{Motif::Flower, Motif::Face, Motif::Frames, Motif::Dots};
    double canvas_width = 256;
    double canvas_height = 256;
    int count = 1; // graphics per generated corpus

    // Throws InvalidSpec.
    void validate() const;
};

// {"n_groups", "paths_per_group": [lo, hi], "motifs": [...], "canvas": [w, h], "count"};
// every key optional. Throws InvalidSpec.
SynthSpec parse_synth_spec(std::string_view json_text);

struct SynthGraphic {
    std::string svg;
    LabeledGraphic labeled;
};

// Places n_groups motifs in two compact, well separated regions of the
// canvas (the whole canvas when n_groups is 1), one motif per grid cell. The root splits the regions;
// each motif is one subtree with its own nested parts as deeper groups. Fill colors come from a palette shared
// by all motifs. Deterministic per seed. The tree is binary: groups with
// more than two members are split into nested pairs by center distance.
//   flower: disc + petals ring        -> (disc, (petals...))
//   face:   head + eyes, mouth, spots -> (head, ((eyes), mouth, (spots)))
//   frames: concentric rectangles     -> (outer, (next, (... innermost)))
//   dots:   one or two tight clusters -> ((dots...), (dots...))
SynthGraphic synth_generate(std::uint64_t seed, const SynthSpec& spec);

} // namespace vgroup
