#pragma once

#include "vgroup/augment.hpp"
#include "vgroup/location_model.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vgroup {

struct InfoNce {
    double loss = 0;
    double d_pos = 0; // dL / ds_pos
    double d_neg = 0; // dL / ds_neg
};

// -log(e^{s+/t} / (e^{s+/t} + e^{s-/t})), evaluated as softplus((s- - s+)/t).
// Throws std::invalid_argument for t <= 0.
InfoNce infonce_loss(double s_pos, double s_neg, double temperature);

struct Triplet {
    NodeId ref = 0;
    NodeId pos = 0;
    NodeId neg = 0;
    int doc_ref = -1;
};

// TDist(ref,pos) < TDist(ref,neg) and TDist(ref,pos) < TDist(pos,neg); the
// non-strict form keeps only the first condition.
bool is_valid_triplet(const GroupTree& tree, NodeId ref, NodeId pos, NodeId neg, bool strict = true);

// Draws three distinct vertices uniformly and picks a uniformly random
// qualifying ordering; redraws when none qualifies. Throws SamplingExhausted
// after 1000 rejected draws, std::invalid_argument for trees with < 3 nodes.
Triplet sample_triplet(const GroupTree& tree, std::mt19937_64& rng, bool strict = true);

// Exhaustive check whether any vertex triple qualifies.
bool has_valid_triplet(const GroupTree& tree, bool strict = true);

// A triplet resolved to the three normalized boxes fed to the encoder.
struct BoxTriplet {
    NormBox ref, pos, neg;
};

BoxTriplet resolve(const LabeledGraphic& sample, const Triplet& t);

// Mean InfoNCE loss over the batch. When `grad` is given (size
// LocationModel::param_count()) it receives the gradient of that mean.
double batch_loss(const LocationModel& model, std::span<const BoxTriplet> batch, double temperature,
                  std::vector<double>* grad = nullptr);

struct TrainConfig {
    int epochs = 28;
    int triplets_per_epoch = 25600;
    int batch_size = 32;
    double learning_rate = 2e-4;
    double lr_decay_factor = 0.1;
    int lr_decay_every = 7;
    double temperature = 0.1;
    std::uint64_t seed = 0;
    int validation_triplets = 2560;
    bool strict_sampling = true;

    // Throws InvalidConfig.
    void validate() const;
};

// Config JSON: any subset of the fields above, plus an optional "augment"
// object (see parse_augment_config). Unknown keys are rejected.
struct TrainingSetup {
    TrainConfig train;
    AugmentConfig augment;
};
TrainingSetup parse_training_setup(std::string_view json_text);
std::string to_json(const TrainConfig& cfg);

struct EpochRecord {
    int epoch = 0; // 1-based
    double learning_rate = 0;
    double train_loss = 0;
    double validation_loss = 0;
};

struct TrainResult {
    LocationModel model; // parameters with the lowest validation loss
    std::vector<EpochRecord> history;
    int best_epoch = 0;
};

// Adam (0.9, 0.999, 1e-8) with the rate multiplied by lr_decay_factor every
// lr_decay_every epochs. Each epoch draws triplets_per_epoch triplets, one per
// freshly augmented sample. The validation triplets are drawn once from the
// un-augmented dataset. Throws SamplingExhausted when no dataset tree admits a
// triplet, NonFiniteLoss when a batch loss is not finite.
TrainResult train(std::span<const LabeledGraphic> dataset, const TrainConfig& cfg, const AugmentConfig& augment);

// CSV with header epoch,learning_rate,train_loss,validation_loss.
std::string history_csv(const std::vector<EpochRecord>& history);

} // namespace vgroup
