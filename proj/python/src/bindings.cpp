#include "vgroup/corpus.hpp"
#include "vgroup/errors.hpp"
#include "vgroup/infer.hpp"
#include "vgroup/metrics.hpp"
#include "vgroup/model_io.hpp"
#include "vgroup/svg.hpp"
#include "vgroup/synth.hpp"
#include "vgroup/training.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vgroup;

namespace {

std::shared_ptr<AffinityModel> model_from(const std::string& spec, const GroupTree* ground_truth) {
    if (spec == "oracle") {
        if (!ground_truth) throw std::invalid_argument("the oracle model needs a ground-truth tree");
        return std::make_shared<OracleAffinity>(*ground_truth);
    }
    return std::shared_ptr<AffinityModel>(load_model(spec));
}

} // namespace

PYBIND11_MODULE(_vgroup, m) {
    m.doc() = "Grouping hierarchies for vector graphics";

    py::register_exception<Error>(m, "VGroupError", PyExc_ValueError);

    py::class_<VectorDocument>(m, "Document")
        .def("__len__", &VectorDocument::size)
        .def_readonly("canvas_width", &VectorDocument::canvas_width)
        .def_readonly("canvas_height", &VectorDocument::canvas_height)
        .def("polyline", [](const VectorDocument& d, int i) {
            std::vector<std::pair<double, double>> out;
            for (const Point& p : d.paths.at(i).polyline) out.emplace_back(p.x, p.y);
            return out;
        })
        .def("to_json", [](const VectorDocument& d) { return to_doc_json(d); })
        .def("to_svg", &write_svg);

    m.def("parse_svg", [](const std::string& text) { return parse_document(text); }, py::arg("text"));
    m.def("load_svg", [](const std::string& path) { return parse_document(read_file(path)); }, py::arg("path"));

    py::class_<GroupTree>(m, "Tree")
        .def_static("from_json", [](const std::string& text) { return deserialize(text); })
        .def("to_json", [](const GroupTree& t, int indent) { return serialize(t, indent); }, py::arg("indent") = -1)
        .def("__len__", &GroupTree::size)
        .def("__eq__", [](const GroupTree& a, const GroupTree& b) { return a == b; })
        .def_property_readonly("root", &GroupTree::root)
        .def_property_readonly("leaf_count", &GroupTree::leaf_count)
        .def_property_readonly("height", &GroupTree::height)
        .def("children", [](const GroupTree& t, NodeId v) { return t.node(v).children; })
        .def("parent", &GroupTree::parent)
        .def("depth", &GroupTree::depth)
        .def("is_leaf", &GroupTree::is_leaf)
        .def("leaves", &GroupTree::leaves_of)
        .def("leaf_of_path", &GroupTree::leaf_of_path)
        .def("lca", &GroupTree::lca)
        .def("tdist", &GroupTree::tdist);

    m.def(
        "infer",
        [](const VectorDocument& doc, const std::string& model, bool containment, const GroupTree* ground_truth) {
            const auto affinity = model_from(model, ground_truth);
            py::gil_scoped_release release;
            return containment ? containment_guided_tree(*affinity, doc) : greedy_tree(*affinity, doc);
        },
        py::arg("doc"), py::arg("model") = "heuristic", py::arg("containment") = false,
        py::arg("ground_truth") = nullptr,
        "Grouping tree for a document. `model` is 'heuristic', 'oracle' (needs ground_truth) or a model file.");

    m.def("containment", [](const VectorDocument& doc) { return containment_graph(doc).parent_of; },
          "For each path, the index of its immediate container or None.");
    m.def("realizes_containment", [](const GroupTree& t, const VectorDocument& doc) {
        return realizes_containment(t, containment_graph(doc));
    });

    m.def("suggest", [](const GroupTree& t, const std::vector<int>& paths, int k) {
        std::vector<std::pair<NodeId, double>> out;
        for (const Suggestion& s : scribble_suggest(t, paths, k)) out.emplace_back(s.node, s.score);
        return out;
    }, py::arg("tree"), py::arg("paths"), py::arg("k") = 3);

    m.def("cted", &cted);
    m.def("fmi", py::overload_cast<const GroupTree&, const GroupTree&, int>(&fmi), py::arg("a"), py::arg("b"),
          py::arg("depth") = 1);
    m.def("node_overlap", [](const std::vector<int>& group, const GroupTree& t) { return node_overlap(group, t); });
    m.def("mean_node_overlap", &mean_node_overlap);

    m.def(
        "synthesize",
        [](std::uint64_t seed, const std::string& spec) {
            SynthGraphic g = synth_generate(seed, parse_synth_spec(spec));
            return py::make_tuple(g.svg, g.labeled.doc, g.labeled.tree);
        },
        py::arg("seed"), py::arg("spec") = "{}", "Returns (svg text, document, ground-truth tree).");

    m.def(
        "train",
        [](const std::string& corpus, const std::string& config) {
            const auto data = load_labeled_corpus(scan_corpus(corpus));
            const TrainingSetup setup = parse_training_setup(config);
            py::gil_scoped_release release;
            const TrainResult r = train(data, setup.train, setup.augment);
            return export_model(r.model, setup.train);
        },
        py::arg("corpus"), py::arg("config") = "{}", "Trains on a corpus directory and returns the model file text.");
}
