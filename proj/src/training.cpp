#include "vgroup/training.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace vgroup {

using nlohmann::json;

InfoNce infonce_loss(double s_pos, double s_neg, double temperature) {
    if (!(temperature > 0)) throw std::invalid_argument("infonce_loss: temperature must be positive");
    const double x = (s_neg - s_pos) / temperature;
    InfoNce r;
    r.loss = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    const double sig = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    r.d_pos = -sig / temperature;
    r.d_neg = sig / temperature;
    return r;
}

bool is_valid_triplet(const GroupTree& tree, NodeId ref, NodeId pos, NodeId neg, bool strict) {
    const int rp = tree.tdist(ref, pos);
    if (!(rp < tree.tdist(ref, neg))) return false;
    return !strict || rp < tree.tdist(pos, neg);
}

Triplet sample_triplet(const GroupTree& tree, std::mt19937_64& rng, bool strict) {
    const int m = tree.size();
    if (m < 3) throw std::invalid_argument("sample_triplet: tree needs at least 3 nodes");
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        NodeId v[3];
        v[0] = pick(rng);
        do v[1] = pick(rng);
        while (v[1] == v[0]);
        do v[2] = pick(rng);
        while (v[2] == v[0] || v[2] == v[1]);

        static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        int ok[6];
        int n_ok = 0;
        for (int p = 0; p < 6; ++p) {
            if (is_valid_triplet(tree, v[kPerms[p][0]], v[kPerms[p][1]], v[kPerms[p][2]], strict)) ok[n_ok++] = p;
        }
        if (n_ok == 0) continue;
        const int* perm = kPerms[ok[std::uniform_int_distribution<int>(0, n_ok - 1)(rng)]];
        return {v[perm[0]], v[perm[1]], v[perm[2]], -1};
    }
    throw SamplingExhausted("no valid triplet after 1000 draws (degenerate tree)");
}

bool has_valid_triplet(const GroupTree& tree, bool strict) {
    const int m = tree.size();
    for (NodeId a = 0; a < m; ++a) {
        for (NodeId b = 0; b < m; ++b) {
            if (b == a) continue;
            for (NodeId c = 0; c < m; ++c) {
                if (c != a && c != b && is_valid_triplet(tree, a, b, c, strict)) return true;
            }
        }
    }
    return false;
}

BoxTriplet resolve(const LabeledGraphic& sample, const Triplet& t) {
    const auto box = [&](NodeId v) { return normalize_bbox(sample.doc, sample.tree.leaves_of(v)); };
    return {box(t.ref), box(t.pos), box(t.neg)};
}

double batch_loss(const LocationModel& model, std::span<const BoxTriplet> batch, double temperature,
                  std::vector<double>* grad) {
    if (batch.empty()) return 0.0;
    if (grad) grad->assign(LocationModel::param_count(), 0.0);
    const double scale = 1.0 / static_cast<double>(batch.size());
    LocationModel::Trace tr, tp, tn;
    std::vector<double> gr(kEmbeddingDim), gp(kEmbeddingDim), gn(kEmbeddingDim);
    double total = 0;
    for (const BoxTriplet& b : batch) {
        model.forward(b.ref, tr);
        model.forward(b.pos, tp);
        model.forward(b.neg, tn);
        const auto& yr = tr.embedding.values;
        const auto& yp = tp.embedding.values;
        const auto& yn = tn.embedding.values;
        const InfoNce l = infonce_loss(cosine_affinity(tr.embedding, tp.embedding),
                                       cosine_affinity(tr.embedding, tn.embedding), temperature);
        total += l.loss;
        if (!grad) continue;
        const double dp = l.d_pos * scale, dn = l.d_neg * scale;
        for (int i = 0; i < kEmbeddingDim; ++i) {
            gr[i] = dp * yp[i] + dn * yn[i];
            gp[i] = dp * yr[i];
            gn[i] = dn * yr[i];
        }
        model.backward(tr, gr, *grad);
        model.backward(tp, gp, *grad);
        model.backward(tn, gn, *grad);
    }
    return total * scale;
}

void TrainConfig::validate() const {
    if (epochs < 1 || triplets_per_epoch < 1 || batch_size < 1 || lr_decay_every < 1 || validation_triplets < 1) {
        throw InvalidConfig("epochs, triplets_per_epoch, batch_size, lr_decay_every and validation_triplets must be positive");
    }
    if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) throw InvalidConfig("learning_rate must be >= 0");
    if (!(lr_decay_factor > 0)) throw InvalidConfig("lr_decay_factor must be positive");
    if (!(temperature > 0)) throw InvalidConfig("temperature must be positive");
}

TrainingSetup parse_training_setup(std::string_view text) {
    TrainingSetup s;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("train config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("train config: expected an object");
    TrainConfig& c = s.train;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "epochs") c.epochs = v.get<int>();
            else if (key == "triplets_per_epoch") c.triplets_per_epoch = v.get<int>();
            else if (key == "batch_size") c.batch_size = v.get<int>();
            else if (key == "learning_rate") c.learning_rate = v.get<double>();
            else if (key == "lr_decay_factor") c.lr_decay_factor = v.get<double>();
            else if (key == "lr_decay_every") c.lr_decay_every = v.get<int>();
            else if (key == "temperature") c.temperature = v.get<double>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "validation_triplets") c.validation_triplets = v.get<int>();
            else if (key == "strict_sampling") c.strict_sampling = v.get<bool>();
            else if (key == "augment") s.augment = parse_augment_config(v.dump());
            else throw InvalidConfig("train config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("train config: ") + e.what());
    }
    c.validate();
    return s;
}

std::string to_json(const TrainConfig& c) {
    return json{{"epochs", c.epochs},
                {"triplets_per_epoch", c.triplets_per_epoch},
                {"batch_size", c.batch_size},
                {"learning_rate", c.learning_rate},
                {"lr_decay_factor", c.lr_decay_factor},
                {"lr_decay_every", c.lr_decay_every},
                {"temperature", c.temperature},
                {"seed", c.seed},
                {"validation_triplets", c.validation_triplets},
                {"strict_sampling", c.strict_sampling}}
        .dump();
}

namespace {

class Adam {
public:
    explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
        ++t_;
        const double c1 = 1.0 - std::pow(kBeta1, t_);
        const double c2 = 1.0 - std::pow(kBeta2, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
            v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
            params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
        }
    }

private:
    static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    std::vector<double> m_, v_;
    int t_ = 0;
};

BoxTriplet draw_training_triplet(std::span<const LabeledGraphic> dataset, std::mt19937_64& rng,
                                 const AugmentConfig& aug, bool strict) {
    for (int attempt = 0;; ++attempt) {
        const LabeledGraphic sample = augment_sample(dataset, rng, aug);
        try {
            if (sample.tree.size() < 3) throw SamplingExhausted("tree has fewer than 3 nodes");
            return resolve(sample, sample_triplet(sample.tree, rng, strict));
        } catch (const SamplingExhausted&) {
            if (attempt >= 1000) throw;
        }
    }
}

} // namespace

TrainResult train(std::span<const LabeledGraphic> dataset, const TrainConfig& cfg, const AugmentConfig& augment) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    cfg.validate();
    augment.validate();

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset[i].tree.size() >= 3 && has_valid_triplet(dataset[i].tree, cfg.strict_sampling)) usable.push_back(i);
    }
    if (usable.empty()) throw SamplingExhausted("train: no dataset tree admits a valid triplet");

    std::vector<BoxTriplet> validation;
    {
        std::mt19937_64 vrng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
        while (static_cast<int>(validation.size()) < cfg.validation_triplets) {
            const LabeledGraphic& s = dataset[usable[pick(vrng)]];
            try {
                validation.push_back(resolve(s, sample_triplet(s.tree, vrng, cfg.strict_sampling)));
            } catch (const SamplingExhausted&) {
                // A tree with very few qualifying triples; draw another sample.
            }
        }
    }

    TrainResult result;
    LocationModel model = LocationModel::kaiming(cfg.seed);
    Adam adam(LocationModel::param_count());
    std::mt19937_64 rng(cfg.seed);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> grad;
    std::vector<BoxTriplet> batch;
    batch.reserve(cfg.batch_size);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double lr = cfg.learning_rate * std::pow(cfg.lr_decay_factor, (epoch - 1) / cfg.lr_decay_every);
        double epoch_loss = 0;
        int batch_index = 0;
        for (int drawn = 0; drawn < cfg.triplets_per_epoch;) {
            batch.clear();
            for (; drawn < cfg.triplets_per_epoch && static_cast<int>(batch.size()) < cfg.batch_size; ++drawn) {
                batch.push_back(draw_training_triplet(dataset, rng, augment, cfg.strict_sampling));
            }
            const double loss = batch_loss(model, batch, cfg.temperature, &grad);
            if (!std::isfinite(loss)) {
                char msg[160];
                std::snprintf(msg, sizeof msg, "non-finite batch loss (%g) at epoch %d, batch %d, learning rate %g",
                              loss, epoch, batch_index, lr);
                throw NonFiniteLoss(msg);
            }
            epoch_loss += loss * static_cast<double>(batch.size());
            adam.step(model.params(), grad, lr);
            ++batch_index;
        }
        const double val = batch_loss(model, validation, cfg.temperature);
        result.history.push_back({epoch, lr, epoch_loss / cfg.triplets_per_epoch, val});
        if (val < best) {
            best = val;
            result.model = model;
            result.best_epoch = epoch;
        }
    }
    if (result.best_epoch == 0) {
        // Validation loss never finite; keep the final parameters.
        result.model = model;
        result.best_epoch = cfg.epochs;
    }
    return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
    std::string out = "epoch,learning_rate,train_loss,validation_loss\n";
    char line[128];
    for (const EpochRecord& r : history) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", r.epoch, r.learning_rate, r.train_loss,
                      r.validation_loss);
        out += line;
    }
    return out;
}

} // namespace vgroup
