#include "vgroup/corpus.hpp"

#include "vgroup/errors.hpp"
#include "vgroup/model_io.hpp"
#include "vgroup/svg.hpp"

#include <algorithm>

namespace vgroup {

namespace fs = std::filesystem;

const CorpusEntry* CorpusIndex::find(std::string_view id) const {
    const auto it = std::ranges::lower_bound(entries, id, {}, &CorpusEntry::id);
    return it != entries.end() && it->id == id ? &*it : nullptr;
}

CorpusIndex scan_corpus(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw std::runtime_error("corpus directory not found: " + root.string());
    CorpusIndex index;
    for (const auto& dir : fs::directory_iterator(root, ec)) {
        if (!dir.is_directory()) continue;
        const fs::path svg = dir.path() / "graphic.svg";
        if (!fs::is_regular_file(svg)) continue;
        CorpusEntry e{dir.path().filename().string(), svg, std::nullopt};
        const fs::path tree = dir.path() / "tree.json";
        if (fs::is_regular_file(tree)) e.tree_path = tree;
        index.entries.push_back(std::move(e));
    }
    if (ec) throw std::runtime_error("cannot read corpus directory " + root.string() + ": " + ec.message());
    std::ranges::sort(index.entries, {}, &CorpusEntry::id);
    return index;
}

VectorDocument load_document(const CorpusEntry& entry) {
    return parse_document(read_file(entry.svg_path), {.tolerance = std::nullopt, .source_id = entry.id});
}

LabeledGraphic load_labeled(const CorpusEntry& entry) {
    if (!entry.tree_path) throw ValidationError("graphic '" + entry.id + "' has no tree.json");
    VectorDocument doc = load_document(entry);
    GroupTree tree = deserialize(read_file(*entry.tree_path));
    if (auto v = validate(tree, doc.size())) {
        throw ValidationError("tree of '" + entry.id + "' does not match its graphic: " + v->message());
    }
    return {std::move(doc), std::move(tree)};
}

std::vector<LabeledGraphic> load_labeled_corpus(const CorpusIndex& index) {
    std::vector<LabeledGraphic> out;
    for (const auto& e : index.entries) {
        if (e.tree_path) out.push_back(load_labeled(e));
    }
    return out;
}

void write_corpus_entry(const fs::path& root, const std::string& id, const std::string& svg, const GroupTree& tree) {
    const fs::path dir = root / id;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "graphic.svg", svg);
    write_file(dir / "tree.json", serialize(tree, 1) + "\n");
}

} // namespace vgroup
