#include "miml/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

namespace miml {

namespace {

constexpr double kProbClamp = 1e-12;

void check_dims(const ScorerModel& model, const Instance& instance) {
    if (instance.features.size() != model.config.feature_dim) {
        throw ValidationError("instance '" + instance.id + "' has feature length " +
                              std::to_string(instance.features.size()) + ", model expects " +
                              std::to_string(model.config.feature_dim));
    }
}

// Forward pass keeping the post-activation output of every layer; caches[0]
// is the input, caches.back() the raw scores.
std::vector<std::vector<double>> forward_cached(const ScorerModel& model,
                                                const std::vector<double>& features) {
    std::vector<std::vector<double>> activations;
    activations.reserve(model.layers.size() + 1);
    activations.push_back(features);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const DenseLayer& layer = model.layers[l];
        const std::vector<double>& prev = activations.back();
        std::vector<double> next(layer.out);
        for (std::size_t r = 0; r < layer.out; ++r) {
            double acc = layer.bias[r];
            const double* row = layer.weights.data() + r * layer.in;
            for (std::size_t c = 0; c < layer.in; ++c) {
                acc += row[c] * prev[c];
            }
            next[r] = acc;
        }
        const bool is_output = (l + 1 == model.layers.size());
        if (!is_output) {
            for (double& v : next) {
                v = std::tanh(v);
            }
        }
        activations.push_back(std::move(next));
    }
    return activations;
}

std::vector<DenseLayer> zero_like(const std::vector<DenseLayer>& layers) {
    std::vector<DenseLayer> zeros;
    zeros.reserve(layers.size());
    for (const auto& layer : layers) {
        DenseLayer z;
        z.in = layer.in;
        z.out = layer.out;
        z.weights.assign(layer.weights.size(), 0.0);
        z.bias.assign(layer.bias.size(), 0.0);
        zeros.push_back(std::move(z));
    }
    return zeros;
}

// Backpropagation for one instance; accumulates parameter gradients of the
// per-instance loss into grads and returns the loss value.
double accumulate_instance(const ScorerModel& model, const TaggedInstance& sample,
                           std::vector<DenseLayer>& grads) {
    check_dims(model, sample.instance);
    if (sample.labels.size() != model.config.num_tags) {
        throw ValidationError("tagged instance '" + sample.instance.id + "' has label length " +
                              std::to_string(sample.labels.size()) + ", model expects " +
                              std::to_string(model.config.num_tags));
    }

    const auto activations = forward_cached(model, sample.instance.features);
    const std::vector<double>& scores = activations.back();

    double sample_loss = 0.0;
    std::vector<double> delta(scores.size());
    for (std::size_t t = 0; t < scores.size(); ++t) {
        const double p = std::clamp(sigmoid(scores[t]), kProbClamp, 1.0 - kProbClamp);
        const double y = sample.labels.test(t) ? 1.0 : 0.0;
        sample_loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        delta[t] = sigmoid(scores[t]) - y;
    }

    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const DenseLayer& layer = model.layers[l];
        DenseLayer& grad = grads[l];
        const std::vector<double>& input = activations[l];
        for (std::size_t r = 0; r < layer.out; ++r) {
            const double d = delta[r];
            grad.bias[r] += d;
            double* grow = grad.weights.data() + r * layer.in;
            for (std::size_t c = 0; c < layer.in; ++c) {
                grow[c] += d * input[c];
            }
        }
        if (l > 0) {
            // d/dz of tanh(z) expressed through the cached activation a = tanh(z).
            std::vector<double> prev_delta(layer.in, 0.0);
            for (std::size_t r = 0; r < layer.out; ++r) {
                const double d = delta[r];
                const double* row = layer.weights.data() + r * layer.in;
                for (std::size_t c = 0; c < layer.in; ++c) {
                    prev_delta[c] += row[c] * d;
                }
            }
            for (std::size_t c = 0; c < layer.in; ++c) {
                const double a = input[c];
                prev_delta[c] *= (1.0 - a * a);
            }
            delta = std::move(prev_delta);
        }
    }
    return sample_loss;
}

BatchGradients gradients_over(const ScorerModel& model,
                              const std::vector<TaggedInstance>& data,
                              std::span<const std::size_t> indices) {
    BatchGradients result;
    result.layers = zero_like(model.layers);
    double total_loss = 0.0;
    for (std::size_t idx : indices) {
        total_loss += accumulate_instance(model, data[idx], result.layers);
    }
    const double scale = indices.empty() ? 0.0 : 1.0 / static_cast<double>(indices.size());
    for (auto& layer : result.layers) {
        for (double& w : layer.weights) {
            w *= scale;
        }
        for (double& b : layer.bias) {
            b *= scale;
        }
    }
    result.mean_loss = total_loss * scale;
    return result;
}

void validate_training_inputs(const ScorerConfig& config,
                              const std::vector<TaggedInstance>& data) {
    if (config.feature_dim == 0 || config.num_tags == 0) {
        throw ValidationError("scorer config needs feature_dim and num_tags set");
    }
    if (config.batch_size < 1 || config.epochs < 1) {
        throw ValidationError("scorer config needs batch_size >= 1 and epochs >= 1");
    }
    if (config.learning_rate < 0.0 || config.weight_decay < 0.0 ||
        config.momentum < 0.0 || config.momentum >= 1.0) {
        throw ValidationError("scorer config has out-of-range optimizer parameters");
    }
    if (data.empty()) {
        throw ValidationError("training data is empty");
    }
    for (const auto& sample : data) {
        if (sample.instance.features.size() != config.feature_dim) {
            throw ValidationError("training instance '" + sample.instance.id +
                                  "' does not match feature_dim");
        }
    }
}

ScorerModel run_sgd(ScorerModel model, const ScorerConfig& config,
                    const std::vector<TaggedInstance>& data) {
    validate_training_inputs(config, data);
    model.config = config;

    std::mt19937_64 rng(config.rng_seed + 0x5167d5ULL); // distinct stream from init
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<DenseLayer> velocity = zero_like(model.layers);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, order.size() - start);
            BatchGradients grads =
                gradients_over(model, data, std::span(order).subspan(start, count));
            if (!std::isfinite(grads.mean_loss)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch " + std::to_string(batch_index));
            }
            epoch_loss += grads.mean_loss * static_cast<double>(count);

            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                DenseLayer& layer = model.layers[l];
                DenseLayer& vel = velocity[l];
                const DenseLayer& g = grads.layers[l];
                for (std::size_t i = 0; i < layer.weights.size(); ++i) {
                    vel.weights[i] = config.momentum * vel.weights[i] + g.weights[i] +
                                     config.weight_decay * layer.weights[i];
                    layer.weights[i] -= config.learning_rate * vel.weights[i];
                }
                for (std::size_t i = 0; i < layer.bias.size(); ++i) {
                    vel.bias[i] = config.momentum * vel.bias[i] + g.bias[i];
                    layer.bias[i] -= config.learning_rate * vel.bias[i];
                }
            }
            ++batch_index;
        }
        model.epoch_losses.push_back(epoch_loss / static_cast<double>(data.size()));
        ++model.trained_epochs;
    }
    return model;
}

} // namespace

void ScorerConfig::validate() const {
    if (feature_dim == 0) {
        throw ValidationError("feature_dim must be at least 1");
    }
    if (num_tags == 0) {
        throw ValidationError("num_tags must be at least 1");
    }
    for (std::size_t w : hidden_widths) {
        if (w == 0) {
            throw ValidationError("hidden widths must be positive");
        }
    }
    if (!(learning_rate > 0.0)) {
        throw ValidationError("learning_rate must be positive");
    }
    if (batch_size < 1) {
        throw ValidationError("batch_size must be at least 1");
    }
    if (momentum < 0.0 || momentum >= 1.0) {
        throw ValidationError("momentum must lie in [0, 1)");
    }
    if (weight_decay < 0.0) {
        throw ValidationError("weight_decay must be non-negative");
    }
    if (epochs < 1) {
        throw ValidationError("epochs must be at least 1");
    }
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

ScoreVector forward(const ScorerModel& model, const Instance& instance) {
    check_dims(model, instance);
    auto activations = forward_cached(model, instance.features);
    return ScoreVector(std::move(activations.back()));
}

double loss(const ScoreVector& scores, const LabelVector& labels) {
    if (scores.size() != labels.size()) {
        throw ValidationError("score/label length mismatch");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < scores.size(); ++t) {
        const double p = std::clamp(sigmoid(scores[t]), kProbClamp, 1.0 - kProbClamp);
        const double y = labels.test(t) ? 1.0 : 0.0;
        total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return total;
}

ScoreVector loss_gradient(const ScoreVector& scores, const LabelVector& labels) {
    if (scores.size() != labels.size()) {
        throw ValidationError("score/label length mismatch");
    }
    std::vector<double> grad(scores.size());
    for (std::size_t t = 0; t < scores.size(); ++t) {
        grad[t] = sigmoid(scores[t]) - (labels.test(t) ? 1.0 : 0.0);
    }
    return ScoreVector(std::move(grad));
}

BatchGradients compute_gradients(const ScorerModel& model,
                                 std::span<const TaggedInstance> batch) {
    BatchGradients result;
    result.layers = zero_like(model.layers);
    double total_loss = 0.0;
    for (const auto& sample : batch) {
        total_loss += accumulate_instance(model, sample, result.layers);
    }
    const double scale = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
    for (auto& layer : result.layers) {
        for (double& w : layer.weights) {
            w *= scale;
        }
        for (double& b : layer.bias) {
            b *= scale;
        }
    }
    result.mean_loss = total_loss * scale;
    return result;
}

ScorerModel initialize_scorer(const ScorerConfig& config) {
    if (config.feature_dim == 0 || config.num_tags == 0) {
        throw ValidationError("scorer config needs feature_dim and num_tags set");
    }
    std::vector<std::size_t> widths;
    widths.push_back(config.feature_dim);
    widths.insert(widths.end(), config.hidden_widths.begin(), config.hidden_widths.end());
    widths.push_back(config.num_tags);

    ScorerModel model;
    model.config = config;
    std::mt19937_64 rng(config.rng_seed);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        DenseLayer layer;
        layer.in = widths[l];
        layer.out = widths[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        layer.weights.resize(layer.in * layer.out);
        for (double& w : layer.weights) {
            w = dist(rng);
        }
        layer.bias.assign(layer.out, 0.0);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

ScorerModel train(const ScorerConfig& config, const std::vector<TaggedInstance>& data) {
    return run_sgd(initialize_scorer(config), config, data);
}

ScorerModel train_from(ScorerModel model, const ScorerConfig& config,
                       const std::vector<TaggedInstance>& data) {
    if (model.config.feature_dim != config.feature_dim ||
        model.config.num_tags != config.num_tags) {
        throw ValidationError("warm-start model does not match the requested dimensions");
    }
    return run_sgd(std::move(model), config, data);
}

ScoreTable::ScoreTable(std::vector<BagScores> rows) : rows_(std::move(rows)) {
    bag_index_.reserve(rows_.size());
    instance_index_.resize(rows_.size());
    for (std::size_t b = 0; b < rows_.size(); ++b) {
        if (!bag_index_.emplace(rows_[b].bag_id, b).second) {
            throw ValidationError("score table has duplicate bag id: " + rows_[b].bag_id);
        }
        if (rows_[b].instance_ids.size() != rows_[b].scores.size()) {
            throw ValidationError("score table row for bag '" + rows_[b].bag_id +
                                  "' has mismatched ids and scores");
        }
        auto& index = instance_index_[b];
        index.reserve(rows_[b].instance_ids.size());
        for (std::size_t i = 0; i < rows_[b].instance_ids.size(); ++i) {
            if (!index.emplace(rows_[b].instance_ids[i], i).second) {
                throw ValidationError("score table has duplicate instance id '" +
                                      rows_[b].instance_ids[i] + "' in bag '" +
                                      rows_[b].bag_id + "'");
            }
        }
    }
}

const ScoreVector& ScoreTable::at(const std::string& bag_id,
                                  const std::string& instance_id) const {
    auto b = bag_index_.find(bag_id);
    if (b == bag_index_.end()) {
        throw Error("score table has no bag '" + bag_id + "'");
    }
    const auto& index = instance_index_[b->second];
    auto i = index.find(instance_id);
    if (i == index.end()) {
        throw Error("score table has no entry for instance '" + instance_id + "' in bag '" +
                    bag_id + "'");
    }
    return rows_[b->second].scores[i->second];
}

bool ScoreTable::contains(const std::string& bag_id, const std::string& instance_id) const {
    auto b = bag_index_.find(bag_id);
    if (b == bag_index_.end()) {
        return false;
    }
    return instance_index_[b->second].count(instance_id) > 0;
}

const BagScores& ScoreTable::bag(const std::string& bag_id) const {
    auto b = bag_index_.find(bag_id);
    if (b == bag_index_.end()) {
        throw Error("score table has no bag '" + bag_id + "'");
    }
    return rows_[b->second];
}

std::size_t ScoreTable::total_entries() const {
    std::size_t total = 0;
    for (const auto& row : rows_) {
        total += row.scores.size();
    }
    return total;
}

ScoreTable score_dataset(const ScorerModel& model, const Dataset& dataset,
                         unsigned num_threads) {
    if (dataset.feature_dim != model.config.feature_dim) {
        throw ValidationError("dataset feature_dim does not match the model");
    }

    std::vector<BagScores> rows(dataset.bags.size());
    for (std::size_t b = 0; b < dataset.bags.size(); ++b) {
        rows[b].bag_id = dataset.bags[b].id;
        rows[b].instance_ids.reserve(dataset.bags[b].instances.size());
        for (const auto& instance : dataset.bags[b].instances) {
            rows[b].instance_ids.push_back(instance.id);
        }
        rows[b].scores.resize(dataset.bags[b].instances.size());
    }

    auto score_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            for (std::size_t i = 0; i < dataset.bags[b].instances.size(); ++i) {
                rows[b].scores[i] = forward(model, dataset.bags[b].instances[i]);
            }
        }
    };

    if (num_threads <= 1 || dataset.bags.size() < 2) {
        score_range(0, dataset.bags.size());
    } else {
        // Static partition into preallocated slots: the result does not
        // depend on scheduling.
        const std::size_t workers = std::min<std::size_t>(num_threads, dataset.bags.size());
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (dataset.bags.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(begin + chunk, dataset.bags.size());
            if (begin >= end) {
                break;
            }
            pool.emplace_back(score_range, begin, end);
        }
        for (auto& worker : pool) {
            worker.join();
        }
    }

    return ScoreTable(std::move(rows));
}

namespace {

using nlohmann::json;

json layer_to_json(const DenseLayer& layer) {
    json obj;
    obj["in"] = layer.in;
    obj["out"] = layer.out;
    obj["weights"] = layer.weights;
    obj["bias"] = layer.bias;
    return obj;
}

DenseLayer layer_from_json(const json& obj) {
    DenseLayer layer;
    layer.in = obj.at("in").get<std::size_t>();
    layer.out = obj.at("out").get<std::size_t>();
    layer.weights = obj.at("weights").get<std::vector<double>>();
    layer.bias = obj.at("bias").get<std::vector<double>>();
    if (layer.weights.size() != layer.in * layer.out || layer.bias.size() != layer.out) {
        throw ParseError("model layer has inconsistent shapes");
    }
    return layer;
}

} // namespace

void save_model(const ScorerModel& model, const std::string& path) {
    json obj;
    obj["format_version"] = 1;
    obj["kind"] = "miml_scorer";
    obj["config"] = {
        {"feature_dim", model.config.feature_dim},
        {"hidden_widths", model.config.hidden_widths},
        {"num_tags", model.config.num_tags},
        {"learning_rate", model.config.learning_rate},
        {"batch_size", model.config.batch_size},
        {"momentum", model.config.momentum},
        {"weight_decay", model.config.weight_decay},
        {"epochs", model.config.epochs},
        {"rng_seed", model.config.rng_seed},
    };
    obj["activation"] = model.activation;
    obj["trained_epochs"] = model.trained_epochs;
    obj["epoch_losses"] = model.epoch_losses;
    json layers = json::array();
    for (const auto& layer : model.layers) {
        layers.push_back(layer_to_json(layer));
    }
    obj["layers"] = std::move(layers);

    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open file for writing: " + path);
    }
    out << obj.dump(2) << '\n';
    if (!out) {
        throw Error("I/O error while writing: " + path);
    }
}

ScorerModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open model file: " + path);
    }
    json obj = json::parse(in, nullptr, false);
    if (obj.is_discarded()) {
        throw ParseError("model file is not valid JSON: " + path);
    }
    if (obj.value("kind", "") != "miml_scorer" || obj.value("format_version", 0) != 1) {
        throw ParseError("unsupported model file: " + path);
    }

    ScorerModel model;
    const json& cfg = obj.at("config");
    model.config.feature_dim = cfg.at("feature_dim").get<std::size_t>();
    model.config.hidden_widths = cfg.at("hidden_widths").get<std::vector<std::size_t>>();
    model.config.num_tags = cfg.at("num_tags").get<std::size_t>();
    model.config.learning_rate = cfg.at("learning_rate").get<double>();
    model.config.batch_size = cfg.at("batch_size").get<std::size_t>();
    model.config.momentum = cfg.at("momentum").get<double>();
    model.config.weight_decay = cfg.at("weight_decay").get<double>();
    model.config.epochs = cfg.at("epochs").get<std::size_t>();
    model.config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();
    model.activation = obj.at("activation").get<std::string>();
    model.trained_epochs = obj.at("trained_epochs").get<std::size_t>();
    model.epoch_losses = obj.at("epoch_losses").get<std::vector<double>>();
    for (const auto& layer : obj.at("layers")) {
        model.layers.push_back(layer_from_json(layer));
    }

    // Shape chain must match: feature_dim -> hidden_widths -> num_tags.
    if (model.layers.size() != model.config.hidden_widths.size() + 1) {
        throw ParseError("model layer count does not match its config");
    }
    std::size_t expect = model.config.feature_dim;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const std::size_t want_out = l < model.config.hidden_widths.size()
                                         ? model.config.hidden_widths[l]
                                         : model.config.num_tags;
        if (model.layers[l].in != expect || model.layers[l].out != want_out) {
            throw ParseError("model layers do not chain correctly");
        }
        expect = model.layers[l].out;
    }
    return model;
}

} // namespace miml
