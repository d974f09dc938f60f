#pragma once

#include "vgroup/augment.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vgroup {

// One graphic of a corpus directory: <root>/<id>/graphic.svg and, when
// annotated, <root>/<id>/tree.json.
struct CorpusEntry {
    std::string id;
    std::filesystem::path svg_path;
    std::optional<std::filesystem::path> tree_path;
};

struct CorpusIndex {
    std::vector<CorpusEntry> entries; // sorted by id

    const CorpusEntry* find(std::string_view id) const;
};

// Lists every subdirectory holding a graphic.svg. Throws std::runtime_error
// when the directory cannot be read.
CorpusIndex scan_corpus(const std::filesystem::path& root);

VectorDocument load_document(const CorpusEntry& entry);
// Document plus ground truth. Throws ValidationError when the entry has no
// tree or the tree does not match the document.
LabeledGraphic load_labeled(const CorpusEntry& entry);
// Every annotated entry, in id order.
std::vector<LabeledGraphic> load_labeled_corpus(const CorpusIndex& index);

// Writes <root>/<id>/graphic.svg and tree.json, creating directories.
void write_corpus_entry(const std::filesystem::path& root, const std::string& id, const std::string& svg,
                        const GroupTree& tree);

} // namespace vgroup
