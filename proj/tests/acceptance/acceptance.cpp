// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include "gradcheck.hpp"
#include "oracles.hpp"

#include "vgroup/augment.hpp"
#include "vgroup/infer.hpp"
#include "vgroup/location_model.hpp"
#include "vgroup/metrics.hpp"
#include "vgroup/model_io.hpp"
#include "vgroup/synth.hpp"
#include "vgroup/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

using namespace vgroup;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void cted_against_brute_force() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        const GroupTree a = oracle::random_tree(rng, n), b = oracle::random_tree(rng, n);
        const double dp = constrained_edit_cost(a, b);
        const double bf = oracle::BruteForceCted(a, b).minimum_cost();
        worst = std::max(worst, std::abs(dp - bf));
    }
    const double secs = seconds_since(t0);
    report("cted-dp-vs-brute-force", worst <= 1e-12 && secs < 60,
           fmt("200 pairs, max |dp - brute| = %.2e, %.1f s", worst, secs));
}

void fmi_worked_example() {
    // {1,2,3},{4,5} against {1,2},{3},{4,5}, zero-based.
    const Clustering a{{{0, 1, 2}, {3, 4}}};
    const Clustering b{{{0, 1}, {2}, {3, 4}}};
    const double v = fmi(a, b), want = 2 / std::sqrt(8.0);
    report("fmi-worked-example", std::abs(v - want) <= 1e-9, fmt("fmi = %.12f, expected %.12f", v, want));
}

void identity_suite() {
    std::mt19937_64 rng(7);
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const GroupTree t = oracle::random_tree(rng, std::uniform_int_distribution<int>(1, 30)(rng), 4);
        if (cted(t, t) != 0.0) ++bad;
        for (int d = 1; d <= 3; ++d) {
            if (fmi(t, t, d) != 1.0) ++bad;
        }
        for (NodeId v = 0; v < t.size(); ++v) {
            if (node_overlap(t.leaves_of(v), t) != 1.0) ++bad;
        }
    }
    report("identity-suite", bad == 0, fmt("100 trees, %d violations", bad));
}

NormBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    const double x = u(rng), y = u(rng);
    return {x, y, (1 - x) * u(rng), (1 - y) * u(rng)};
}

void gradient_check() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(99);
    double worst = 0;
    std::size_t kinks = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const LocationModel m = LocationModel::kaiming(500 + trial);
        std::vector<BoxTriplet> batch;
        for (int i = 0; i < 32; ++i) batch.push_back({random_box(rng), random_box(rng), random_box(rng)});
        const auto r = oracle::gradient_check(m, batch, 0.1, 1e-5);
        worst = std::max(worst, r.max_rel_error);
        kinks += r.kinks;
    }
    const std::size_t total = 20 * LocationModel::param_count();
    report("gradient-check", worst < 1e-4,
           fmt("20 batches of 32, max relative error %.2e over %zu parameters (%zu at ReLU kinks skipped), %.1f s", worst,
               total - kinks, kinks, seconds_since(t0)));
}

void oracle_reconstruction() {
    SynthSpec spec;
    spec.min_paths = 2;
    spec.max_paths = 6;
    std::mt19937_64 pick(5);
    std::vector<LabeledGraphic> suite;
    for (std::uint64_t seed = 0; suite.size() < 50; ++seed) {
        spec.n_groups = std::uniform_int_distribution<int>(1, 4)(pick);
        auto g = synth_generate(seed, spec).labeled;
        if (g.doc.size() >= 5 && g.doc.size() <= 25) suite.push_back(std::move(g));
    }
    const auto t0 = std::chrono::steady_clock::now();
    int missed = 0, groups = 0;
    for (const auto& g : suite) {
        const GroupTree t = greedy_tree(OracleAffinity(g.tree), g.doc);
        for (NodeId v = 0; v < g.tree.size(); ++v) {
            if (g.tree.is_leaf(v)) continue;
            ++groups;
            if (node_overlap(g.tree.leaves_of(v), t) != 1.0) ++missed;
        }
    }
    const double secs = seconds_since(t0);
    report("oracle-reconstruction", missed == 0 && secs < 10,
           fmt("50 graphics, %d of %d groups missed, %.2f s", missed, groups, secs));
}

void containment_soundness() {
    SynthSpec spec;
    spec.motifs = {Motif::Frames};
    spec.n_groups = 2;
    const HeuristicAffinity model;
    int edges = 0, unrealized = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = synth_generate(seed, spec).labeled;
        const GroupTree t = containment_guided_tree(model, g.doc);
        const ContainmentGraph graph = containment_graph(g.doc);
        for (int p = 0; p < g.doc.size(); ++p) {
            if (!graph.parent_of[p]) continue;
            ++edges;
            // The container's leaf and every contained leaf share the container's joining node.
            const NodeId anchor = *t.parent(t.leaf_of_path(*graph.parent_of[p]));
            if (!oracle::below_or_equal(t, t.leaf_of_path(p), anchor)) ++unrealized;
        }
    }
    report("containment-soundness", edges > 0 && unrealized == 0,
           fmt("20 seeds, %d edges, %d unrealized", edges, unrealized));
}

class Mapped final : public AffinityModel {
public:
    Mapped(const AffinityModel& base, std::function<double(double)> f) : base_(base), f_(std::move(f)) {}
    double affinity(const VectorDocument& doc, const PathSet& a, const PathSet& b) const override {
        return f_(base_.affinity(doc, a, b));
    }
    std::string fingerprint() const override { return "mapped:" + base_.fingerprint(); }

private:
    const AffinityModel& base_;
    std::function<double(double)> f_;
};

void argmax_invariance() {
    const LocationModel learned = LocationModel::kaiming(17);
    const HeuristicAffinity heuristic;
    int differ = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const VectorDocument doc = synth_generate(700 + seed, SynthSpec{}).labeled.doc;
        for (const AffinityModel* m : {static_cast<const AffinityModel*>(&learned), static_cast<const AffinityModel*>(&heuristic)}) {
            const std::string base = serialize(greedy_tree(*m, doc));
            if (serialize(greedy_tree(Mapped(*m, [](double x) { return 2 * x + 1; }), doc)) != base) ++differ;
            if (serialize(greedy_tree(Mapped(*m, [](double x) { return std::tanh(x); }), doc)) != base) ++differ;
        }
    }
    report("argmax-invariance", differ == 0, fmt("20 documents x 2 models, %d differing trees", differ));
}

std::vector<LabeledGraphic> synth_range(std::uint64_t first, int count) {
    std::vector<LabeledGraphic> out;
    for (int i = 0; i < count; ++i) out.push_back(synth_generate(first + static_cast<std::uint64_t>(i), SynthSpec{}).labeled);
    return out;
}

void learning_trend() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto train_set = synth_range(1000, 200);
    const auto test_set = synth_range(5000, 50);
    TrainConfig cfg;
    cfg.epochs = 8;
    cfg.triplets_per_epoch = 4096;
    cfg.seed = 0;
    const TrainResult r = train(train_set, cfg, AugmentConfig{});
    const HeuristicAffinity heuristic;
    double fmi_learned = 0, fmi_heuristic = 0, cted_learned = 0, cted_heuristic = 0;
    for (const auto& g : test_set) {
        const GroupTree tl = greedy_tree(r.model, g.doc), th = greedy_tree(heuristic, g.doc);
        fmi_learned += fmi(g.tree, tl, 1) / 50;
        fmi_heuristic += fmi(g.tree, th, 1) / 50;
        cted_learned += cted(g.tree, tl) / 50;
        cted_heuristic += cted(g.tree, th) / 50;
    }
    report("learning-trend", fmi_learned - fmi_heuristic >= 0.05 && cted_learned < cted_heuristic,
           fmt("fmi(d=1) learned %.4f vs heuristic %.4f; cted learned %.4f vs heuristic %.4f; %.1f s", fmi_learned,
               fmi_heuristic, cted_learned, cted_heuristic, seconds_since(t0)));
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    return fs::exists(a) && fs::exists(b) && read_file(a) == read_file(b);
}

void cli_determinism(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / ("vgroup-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto run = [&](const std::string& args) {
        const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string d = dir.string();
    bool ok = run("synth --spec '{\"count\": 10}' --seed 300 --out " + d + "/corpus");
    const std::string config = " --config '{\"epochs\": 2, \"triplets_per_epoch\": 512, \"validation_triplets\": 128}'";
    ok = ok && run("train --corpus " + d + "/corpus" + config + " --seed 4 --out " + d + "/m1.json");
    ok = ok && run("train --corpus " + d + "/corpus" + config + " --seed 4 --out " + d + "/m2.json");
    const std::string svg = d + "/corpus/synth-000300/graphic.svg";
    for (const char* model : {"heuristic", "m1.json"}) {
        const std::string m = std::string(model) == "heuristic" ? "heuristic" : d + "/m1.json";
        ok = ok && run("infer " + svg + " --model " + m + " --out " + d + "/t1-" + model);
        ok = ok && run("infer " + svg + " --model " + m + " --containment --out " + d + "/c1-" + model);
        ok = ok && run("infer " + svg + " --model " + m + " --out " + d + "/t2-" + model);
        ok = ok && run("infer " + svg + " --model " + m + " --containment --out " + d + "/c2-" + model);
    }
    const bool ran = ok;
    ok = ok && same_bytes(dir / "m1.json", dir / "m2.json");
    ok = ok && same_bytes(dir / "m1.json.history.csv", dir / "m2.json.history.csv");
    for (const char* model : {"heuristic", "m1.json"}) {
        ok = ok && same_bytes(dir / (std::string("t1-") + model), dir / (std::string("t2-") + model));
        ok = ok && same_bytes(dir / (std::string("c1-") + model), dir / (std::string("c2-") + model));
    }
    fs::remove_all(dir);
    report("cli-determinism", ok, ran ? "train and infer outputs byte-identical across runs" : "a CLI run failed");
}

void augmentation_validity() {
    const auto data = synth_range(40, 30);
    std::mt19937_64 rng(11);
    int invalid = 0;
    for (int i = 0; i < 1000; ++i) {
        const LabeledGraphic g = augment_sample(data, rng, AugmentConfig{});
        if (validate(g.tree, g.doc.size())) ++invalid;
    }
    double worst = 0;
    for (const auto& g : data) {
        for (double deg : {0.0, 360.0}) {
            const VectorDocument r = rotate(g.doc, deg);
            for (int p = 0; p < g.doc.size(); ++p) {
                const auto& a = r.paths[p].polyline;
                const auto& b = g.doc.paths[p].polyline;
                if (a.size() != b.size()) worst = INFINITY;
                for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) worst = std::max(worst, distance(a[k], b[k]));
            }
        }
    }
    report("augmentation-validity", invalid == 0 && worst <= 1e-9,
           fmt("1000 samples, %d invalid; rotation by 0/360 moves points by at most %.2e", invalid, worst));
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : VGROUP_CLI;
    cted_against_brute_force();
    fmi_worked_example();
    identity_suite();
    gradient_check();
    oracle_reconstruction();
    containment_soundness();
    argmax_invariance();
    learning_trend();
    cli_determinism(cli);
    augmentation_validity();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
