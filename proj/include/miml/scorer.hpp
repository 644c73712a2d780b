#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "miml/types.hpp"

namespace miml {

// Hyperparameters of the multi-label instance scorer. The optimizer defaults
// follow the reference training recipe (batch 256, learning rate 1e-3,
// momentum 0.9, weight decay 5e-6, 5 epochs); small-scale experiments usually
// override them.
struct ScorerConfig {
    std::size_t feature_dim = 0;
    std::vector<std::size_t> hidden_widths{32};
    std::size_t num_tags = 0;
    double learning_rate = 1e-3;
    std::size_t batch_size = 256;
    double momentum = 0.9;
    double weight_decay = 5e-6;
    std::size_t epochs = 5;
    std::uint64_t rng_seed = 1;

    // Throws ValidationError on out-of-range values. learning_rate == 0 is
    // tolerated by train() itself (it degenerates to a no-op) but rejected
    // here for experiment configs.
    void validate() const;

    bool operator==(const ScorerConfig&) const = default;
};

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights; // out x in, row-major
    std::vector<double> bias;    // out

    bool operator==(const DenseLayer&) const = default;
};

// Fully-connected scorer: feature_dim -> hidden_widths... -> num_tags with a
// tanh nonlinearity between hidden layers and a linear output (raw scores).
struct ScorerModel {
    ScorerConfig config;
    std::string activation = "tanh";
    std::vector<DenseLayer> layers;
    std::size_t trained_epochs = 0;
    std::vector<double> epoch_losses; // mean per-instance loss per epoch

    bool operator==(const ScorerModel&) const = default;
};

// One training pair: an instance with its (possibly pseudo-tagged) labels.
struct TaggedInstance {
    Instance instance;
    LabelVector labels;
    std::string bag_id;

    bool operator==(const TaggedInstance&) const = default;
};

// Numerically stable logistic function; never overflows for large |x|.
double sigmoid(double x);

// Raw (pre-sigmoid) scores of one instance.
ScoreVector forward(const ScorerModel& model, const Instance& instance);

// Sigmoid cross entropy: -sum_t [y ln sigma(s) + (1-y) ln(1-sigma(s))], with
// probabilities clamped to [1e-12, 1-1e-12] to avoid ln(0).
double loss(const ScoreVector& scores, const LabelVector& labels);

// d loss / d s^t = sigma(s^t) - y^t, bounded in (-1, 1) per component.
ScoreVector loss_gradient(const ScoreVector& scores, const LabelVector& labels);

// Gradients of the mean loss over a batch with respect to every parameter.
// Layer shapes mirror the model's.
struct BatchGradients {
    std::vector<DenseLayer> layers;
    double mean_loss = 0.0;
};
BatchGradients compute_gradients(const ScorerModel& model,
                                 std::span<const TaggedInstance> batch);

// Deterministic parameter initialization: per layer, weights uniform in
// (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero, drawn from rng_seed.
ScorerModel initialize_scorer(const ScorerConfig& config);

// Mini-batch SGD with momentum and weight decay. The gradient is averaged
// over each batch, so the learning rate does not scale with batch size.
// Shuffling and initialization derive deterministically from rng_seed.
// Throws TrainingError naming epoch/batch if the loss turns non-finite.
ScorerModel train(const ScorerConfig& config, const std::vector<TaggedInstance>& data);

// Same optimization loop but starting from an existing model's parameters
// (second-round warm start).
ScorerModel train_from(ScorerModel model, const ScorerConfig& config,
                       const std::vector<TaggedInstance>& data);

// Scores of one bag's instances, in bag order.
struct BagScores {
    std::string bag_id;
    std::vector<std::string> instance_ids;
    std::vector<ScoreVector> scores;
};

// Lookup table (bag_id, instance_id) -> ScoreVector covering every instance
// of the dataset it was built from, exactly once. Rows follow dataset order.
class ScoreTable {
public:
    ScoreTable() = default;
    explicit ScoreTable(std::vector<BagScores> rows);

    // Throws Error when the entry is missing.
    const ScoreVector& at(const std::string& bag_id, const std::string& instance_id) const;
    bool contains(const std::string& bag_id, const std::string& instance_id) const;

    const std::vector<BagScores>& rows() const { return rows_; }
    const BagScores& bag(const std::string& bag_id) const;
    std::size_t total_entries() const;

private:
    std::vector<BagScores> rows_;
    std::unordered_map<std::string, std::size_t> bag_index_;
    std::vector<std::unordered_map<std::string, std::size_t>> instance_index_;
};

// forward() over every instance. num_threads > 1 fans bags out to worker
// threads; the result is identical to the sequential run.
ScoreTable score_dataset(const ScorerModel& model, const Dataset& dataset,
                         unsigned num_threads = 1);

// Versioned JSON container; load(save(m)) reproduces bit-identical parameters.
void save_model(const ScorerModel& model, const std::string& path);
ScorerModel load_model(const std::string& path);

} // namespace miml
