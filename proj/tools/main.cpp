#include "vgroup/corpus.hpp"
#include "vgroup/errors.hpp"
#include "vgroup/infer.hpp"
#include "vgroup/metrics.hpp"
#include "vgroup/model_io.hpp"
#include "vgroup/service.hpp"
#include "vgroup/svg.hpp"
#include "vgroup/synth.hpp"
#include "vgroup/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <thread>

using namespace vgroup;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kModel = 3, kWrite = 4 };

// Error carrying the exit status of the failing stage.
struct StageError : std::runtime_error {
    StageError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

template <class F>
auto stage(int code, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(code, e.what());
    }
}

// Accepts a file path or inline JSON.
std::string json_argument(const std::string& arg) {
    if (arg.empty()) return "{}";
    if (!arg.empty() && arg.front() == '{') return arg;
    return read_file(arg);
}

std::unique_ptr<AffinityModel> model_for(const std::string& spec, const GroupTree* ground_truth) {
    if (spec == "oracle") {
        if (!ground_truth) throw std::runtime_error("the oracle model needs a ground-truth tree");
        return std::make_unique<OracleAffinity>(*ground_truth);
    }
    return load_model(spec);
}

// --- infer ------------------------------------------------------------------

struct InferArgs {
    std::string svg, model = "heuristic", out, gt;
    bool containment = false;
};

int run_infer(const InferArgs& a) {
    const VectorDocument doc = stage(kParse, [&] { return parse_document(read_file(a.svg), {.tolerance = std::nullopt, .source_id = a.svg}); });
    std::optional<GroupTree> gt;
    if (!a.gt.empty()) gt = stage(kParse, [&] { return deserialize(read_file(a.gt)); });
    const auto model = stage(kModel, [&] { return model_for(a.model, gt ? &*gt : nullptr); });
    const auto t0 = std::chrono::steady_clock::now();
    const GroupTree tree = stage(kModel, [&] { return a.containment ? containment_guided_tree(*model, doc) : greedy_tree(*model, doc); });
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    stage(kWrite, [&] {
        write_file(a.out, serialize(tree, 1) + "\n");
        return 0;
    });
    std::printf("%s: %d nodes from %d paths in %.2f ms\n", a.out.c_str(), tree.size(), doc.size(), ms);
    return kOk;
}

// --- verify-containment -----------------------------------------------------

int run_verify(const std::string& svg, const std::string& tree_file, const std::string& dump) {
    const VectorDocument doc = stage(kParse, [&] { return parse_document(read_file(svg)); });
    const GroupTree tree = stage(kParse, [&] { return deserialize(read_file(tree_file)); });
    if (auto v = validate(tree, doc.size())) throw StageError(kParse, "tree does not match the graphic: " + v->message());
    const ContainmentGraph graph = containment_graph(doc);
    if (!dump.empty()) stage(kWrite, [&] {
        write_file(dump, graph.to_json(1) + "\n");
        return 0;
    });
    int realized = 0;
    for (int p = 0; p < doc.size(); ++p) {
        if (!graph.parent_of[p]) continue;
        ContainmentGraph single;
        single.parent_of.assign(doc.size(), std::nullopt);
        single.parent_of[p] = graph.parent_of[p];
        if (realizes_containment(tree, single)) ++realized;
        else std::printf("unrealized: %d inside %d\n", p, *graph.parent_of[p]);
    }
    std::printf("%d/%d containment edges realized\n", realized, graph.edge_count());
    return realized == graph.edge_count() ? kOk : kFailure;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
    std::string corpus, config, out;
    std::optional<std::uint64_t> seed;
};

int run_train(const TrainArgs& a) {
    const auto data = stage(kParse, [&] { return load_labeled_corpus(scan_corpus(a.corpus)); });
    if (data.empty()) throw StageError(kParse, "corpus " + a.corpus + " has no annotated graphics");
    TrainingSetup setup = stage(kParse, [&] { return parse_training_setup(json_argument(a.config)); });
    if (a.seed) setup.train.seed = *a.seed;
    const TrainResult r = stage(kModel, [&] { return train(data, setup.train, setup.augment); });
    for (const EpochRecord& e : r.history) {
        std::printf("epoch %d  lr %.3g  train %.6f  validation %.6f\n", e.epoch, e.learning_rate, e.train_loss, e.validation_loss);
    }
    stage(kWrite, [&] {
        write_file(a.out, export_model(r.model, setup.train));
        write_file(a.out + ".history.csv", history_csv(r.history));
        return 0;
    });
    std::printf("best epoch %d -> %s\n", r.best_epoch, a.out.c_str());
    return kOk;
}

// --- eval -------------------------------------------------------------------

struct Method {
    std::string name; // as given on the command line
    std::string model;
    bool containment = false;
    std::unique_ptr<AffinityModel> loaded; // null for the oracle
};

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        Method m{item, item, false, nullptr};
        if (item.ends_with("@cg")) {
            m.model = item.substr(0, item.size() - 3);
            m.containment = true;
        }
        if (m.model != "oracle") m.loaded = load_model(m.model);
        out.push_back(std::move(m));
    }
    if (out.empty()) throw std::runtime_error("no methods given");
    return out;
}

int run_eval(const std::string& corpus, const std::string& methods, const std::string& out) {
    const CorpusIndex index = stage(kParse, [&] { return scan_corpus(corpus); });
    auto ms = stage(kModel, [&] { return parse_methods(methods); });
    std::string csv = "graphic_id,method,cted,fmi_d1,fmi_d2,fmi_d3,mean_node_overlap\n";
    std::vector<std::array<double, 5>> sums(ms.size(), {0, 0, 0, 0, 0});
    int rows = 0;
    char buf[512];
    for (const CorpusEntry& e : index.entries) {
        if (!e.tree_path) {
            std::fprintf(stderr, "warning: %s has no tree.json, skipped\n", e.id.c_str());
            continue;
        }
        std::optional<LabeledGraphic> loaded;
        try {
            loaded = load_labeled(e);
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "warning: %s skipped: %s\n", e.id.c_str(), ex.what());
            continue;
        }
        const LabeledGraphic& g = *loaded;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const OracleAffinity oracle(g.tree);
            const AffinityModel& model = ms[i].loaded ? *ms[i].loaded : static_cast<const AffinityModel&>(oracle);
            const GroupTree t = stage(kModel, [&] {
                return ms[i].containment ? containment_guided_tree(model, g.doc) : greedy_tree(model, g.doc);
            });
            const std::array<double, 5> v{cted(g.tree, t), fmi(g.tree, t, 1), fmi(g.tree, t, 2), fmi(g.tree, t, 3),
                                          mean_node_overlap(g.tree, t)};
            for (int k = 0; k < 5; ++k) sums[i][k] += v[k];
            std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f\n", e.id.c_str(), ms[i].name.c_str(), v[0], v[1],
                          v[2], v[3], v[4]);
            csv += buf;
        }
        ++rows;
    }
    if (rows == 0) throw StageError(kParse, "corpus " + corpus + " has no annotated graphics");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        std::array<double, 5> m = sums[i];
        for (double& x : m) x /= rows;
        std::snprintf(buf, sizeof buf, "mean,%s,%.6f,%.6f,%.6f,%.6f,%.6f\n", ms[i].name.c_str(), m[0], m[1], m[2], m[3], m[4]);
        csv += buf;
        std::printf("%-24s cted %.4f  fmi1 %.4f  fmi2 %.4f  fmi3 %.4f  overlap %.4f\n", ms[i].name.c_str(), m[0], m[1],
                    m[2], m[3], m[4]);
    }
    stage(kWrite, [&] {
        write_file(out, csv);
        return 0;
    });
    return kOk;
}

// --- synth / augment --------------------------------------------------------

int run_synth(const std::string& spec_arg, std::uint64_t seed, const std::string& out) {
    const SynthSpec spec = stage(kParse, [&] { return parse_synth_spec(json_argument(spec_arg)); });
    for (int i = 0; i < spec.count; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        const SynthGraphic g = synth_generate(s, spec);
        char id[64];
        std::snprintf(id, sizeof id, "synth-%06llu", static_cast<unsigned long long>(s));
        stage(kWrite, [&] {
            write_corpus_entry(out, id, g.svg, g.labeled.tree);
            return 0;
        });
    }
    std::printf("wrote %d graphics to %s\n", spec.count, out.c_str());
    return kOk;
}

int run_augment(const std::string& corpus, const std::string& config, std::uint64_t seed, const std::string& out) {
    const CorpusIndex index = stage(kParse, [&] { return scan_corpus(corpus); });
    std::vector<std::string> ids;
    std::vector<LabeledGraphic> data;
    stage(kParse, [&] {
        for (const auto& e : index.entries) {
            if (!e.tree_path) continue;
            ids.push_back(e.id);
            data.push_back(load_labeled(e));
        }
        return 0;
    });
    if (data.empty()) throw StageError(kParse, "corpus " + corpus + " has no annotated graphics");
    std::optional<int> count;
    const AugmentConfig cfg = stage(kParse, [&] {
        nlohmann::json j = nlohmann::json::parse(json_argument(config));
        if (!j.is_object()) throw InvalidConfig("augment config must be an object");
        if (j.contains("count")) {
            count = j.at("count").get<int>();
            if (*count < 1) throw InvalidConfig("count must be at least 1");
            j.erase("count");
        }
        return parse_augment_config(j.dump());
    });
    std::mt19937_64 rng(seed);
    const int n = count.value_or(static_cast<int>(data.size()));
    for (int i = 0; i < n; ++i) {
        // Without an explicit count every graphic is augmented once, in order.
        LabeledGraphic g = count ? augment_sample(data, rng, cfg) : augment_from(data[i], data, rng, cfg);
        char id[64];
        std::snprintf(id, sizeof id, "aug-%06d", i);
        const std::string name = count ? std::string(id) : ids[i];
        stage(kWrite, [&] {
            write_corpus_entry(out, name, write_svg(g.doc), g.tree);
            return 0;
        });
    }
    std::printf("wrote %d graphics to %s\n", n, out.c_str());
    return kOk;
}

// --- serve ------------------------------------------------------------------

int run_serve(const std::string& corpus, const std::string& model_spec, int port, const std::string& ui,
              bool containment) {
    CorpusIndex index = stage(kParse, [&] { return scan_corpus(corpus); });
    std::shared_ptr<const AffinityModel> model;
    if (model_spec != "oracle") model = stage(kModel, [&] { return std::shared_ptr<const AffinityModel>(load_model(model_spec)); });

    // Block the shutdown signals before any thread starts so that only the
    // waiting thread below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    GraphicService service(std::move(index), model);
    HttpOptions opts;
    opts.port = port;
    opts.containment = containment;
    if (!ui.empty()) opts.static_dir = ui;
    HttpServer server(service, opts);
    const int bound = server.bind();
    std::printf("serving %zu graphics on http://%s:%d\n", service.ids().size(), opts.host.c_str(), bound);
    std::fflush(stdout);

    std::thread worker([&] { server.run(); });
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    worker.join();
    std::printf("stopped\n");
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grouping hierarchies for vector graphics"};
    app.require_subcommand(1);

    InferArgs ia;
    auto* infer = app.add_subcommand("infer", "Infer a grouping tree for one SVG");
    infer->add_option("svg", ia.svg, "Input SVG")->required();
    infer->add_option("--model", ia.model, "Model file, 'heuristic' or 'oracle'")->required();
    infer->add_flag("--containment", ia.containment, "Respect geometric containment");
    infer->add_option("--out", ia.out, "Output tree.json")->required();
    infer->add_option("--gt", ia.gt, "Ground-truth tree.json (oracle model)");

    TrainArgs ta;
    std::uint64_t train_seed = 0;
    auto* trn = app.add_subcommand("train", "Train the location model");
    trn->add_option("--corpus", ta.corpus, "Corpus directory")->required();
    trn->add_option("--config", ta.config, "Training config (JSON file or inline)");
    trn->add_option("--out", ta.out, "Output model file")->required();
    auto* seed_opt = trn->add_option("--seed", train_seed, "Overrides the config seed");

    std::string ev_corpus, ev_methods, ev_out;
    auto* ev = app.add_subcommand("eval", "Compare inferred trees with ground truth");
    ev->add_option("--corpus", ev_corpus, "Corpus directory")->required();
    ev->add_option("--methods", ev_methods, "Comma list: heuristic, oracle or model files; suffix @cg for containment")
        ->required();
    ev->add_option("--out", ev_out, "Output CSV")->required();

    std::string sy_spec, sy_out;
    std::uint64_t sy_seed = 0;
    auto* sy = app.add_subcommand("synth", "Generate a synthetic corpus");
    sy->add_option("--spec", sy_spec, "Synth spec (JSON file or inline)");
    sy->add_option("--seed", sy_seed, "First seed");
    sy->add_option("--out", sy_out, "Output corpus directory")->required();

    std::string au_corpus, au_config, au_out;
    std::uint64_t au_seed = 0;
    auto* au = app.add_subcommand("augment", "Write augmented copies of a corpus");
    au->add_option("--corpus", au_corpus, "Input corpus directory")->required();
    au->add_option("--config", au_config, "Augment config (JSON file or inline)");
    au->add_option("--seed", au_seed, "Random seed");
    au->add_option("--out", au_out, "Output corpus directory")->required();

    std::string sv_corpus, sv_model = "heuristic", sv_ui;
    int sv_port = 8080;
    bool sv_cg = false;
    auto* sv = app.add_subcommand("serve", "Serve graphics and trees over HTTP");
    sv->add_option("--corpus", sv_corpus, "Corpus directory")->required();
    sv->add_option("--model", sv_model, "Model file, 'heuristic' or 'oracle'");
    sv->add_option("--port", sv_port, "Port (default 8080)");
    sv->add_option("--ui", sv_ui, "Directory of the selection UI bundle");
    sv->add_flag("--containment", sv_cg, "Containment-guided trees by default");

    std::string vf_svg, vf_tree, vf_dump;
    auto* vf = app.add_subcommand("verify-containment", "Check that a tree realizes every containment edge");
    vf->add_option("svg", vf_svg, "Input SVG")->required();
    vf->add_option("tree", vf_tree, "tree.json")->required();
    vf->add_option("--dump", vf_dump, "Also write containment.json here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*infer) return run_infer(ia);
        if (*trn) {
            if (*seed_opt) ta.seed = train_seed;
            return run_train(ta);
        }
        if (*ev) return run_eval(ev_corpus, ev_methods, ev_out);
        if (*sy) return run_synth(sy_spec, sy_seed, sy_out);
        if (*au) return run_augment(au_corpus, au_config, au_seed, au_out);
        if (*sv) return run_serve(sv_corpus, sv_model, sv_port, sv_ui, sv_cg);
        if (*vf) return run_verify(vf_svg, vf_tree, vf_dump);
    } catch (const StageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return kFailure;
}
