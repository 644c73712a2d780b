#include "miml/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

namespace miml {

void SvmConfig::validate() const {
    if (!(lambda > 0.0)) {
        throw ValidationError("svm lambda must be positive");
    }
    if (epochs < 1) {
        throw ValidationError("svm epochs must be at least 1");
    }
    if (!(step_offset >= 0.0)) {
        throw ValidationError("svm step_offset must be non-negative");
    }
    if (positive_class_weight && !(*positive_class_weight > 0.0)) {
        throw ValidationError("positive_class_weight must be positive");
    }
}

void ProfileConfig::validate() const {
    if (k < 1) {
        throw ValidationError("profile k must be at least 1");
    }
    if (!std::isfinite(pad_value)) {
        throw ValidationError("pad_value must be finite");
    }
    svm.validate();
}

RestaurantProfile extract_features(const std::string& bag_id,
                                   const std::vector<ScoreVector>& bag_scores,
                                   std::size_t k, double pad_value) {
    if (bag_scores.empty()) {
        throw ValidationError("extract_features needs at least one scored instance");
    }
    if (k < 1) {
        throw ValidationError("k must be at least 1");
    }
    const std::size_t num_tags = bag_scores.front().size();
    RestaurantProfile profile;
    profile.bag_id = bag_id;
    profile.features.resize(num_tags);

    std::vector<double> column(bag_scores.size());
    for (std::size_t t = 0; t < num_tags; ++t) {
        for (std::size_t m = 0; m < bag_scores.size(); ++m) {
            if (bag_scores[m].size() != num_tags) {
                throw ValidationError("bag scores disagree on tag count");
            }
            column[m] = bag_scores[m][t];
        }
        const std::size_t take = std::min(k, column.size());
        std::partial_sort(column.begin(), column.begin() + take, column.end(),
                          std::greater<double>());
        auto& feat = profile.features[t];
        feat.assign(column.begin(), column.begin() + take);
        feat.resize(k, pad_value);
    }
    return profile;
}

TagClassifier train_tag_classifier(std::size_t tag, const std::vector<TagExample>& examples,
                                   const SvmConfig& config) {
    config.validate();
    if (examples.empty()) {
        throw ValidationError("tag " + std::to_string(tag) + ": no training examples");
    }
    const std::size_t dim = examples.front().features.size();
    std::size_t positives = 0;
    for (const auto& example : examples) {
        if (example.features.size() != dim) {
            throw ValidationError("tag " + std::to_string(tag) +
                                  ": examples disagree on feature length");
        }
        positives += example.positive ? 1 : 0;
    }
    const std::size_t negatives = examples.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw ValidationError("tag " + std::to_string(tag) +
                              ": training set is single-class (" + std::to_string(positives) +
                              " positive, " + std::to_string(negatives) + " negative)");
    }

    const double pos_weight = config.positive_class_weight.value_or(
        static_cast<double>(negatives) / static_cast<double>(positives));

    TagClassifier clf;
    clf.tag = tag;
    clf.weights.assign(dim, 0.0);
    clf.bias = 0.0;

    std::mt19937_64 rng(config.rng_seed);
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            ++step;
            const double eta =
                1.0 / (config.lambda * (config.step_offset + static_cast<double>(step)));
            const TagExample& example = examples[idx];
            const double y = example.positive ? 1.0 : -1.0;
            const double c = example.positive ? pos_weight : 1.0;

            double margin = clf.bias;
            for (std::size_t j = 0; j < dim; ++j) {
                margin += clf.weights[j] * example.features[j];
            }
            margin *= y;

            const double shrink = 1.0 - eta * config.lambda;
            for (double& w : clf.weights) {
                w *= shrink;
            }
            if (margin < 1.0) {
                const double scale = eta * c * y;
                for (std::size_t j = 0; j < dim; ++j) {
                    clf.weights[j] += scale * example.features[j];
                }
                clf.bias += scale; // bias is not regularized
            }
        }
    }
    return clf;
}

double hinge_objective(const TagClassifier& classifier, const std::vector<TagExample>& examples,
                       const SvmConfig& config) {
    std::size_t positives = 0;
    for (const auto& example : examples) {
        positives += example.positive ? 1 : 0;
    }
    const std::size_t negatives = examples.size() - positives;
    const double pos_weight = config.positive_class_weight.value_or(
        positives == 0 ? 1.0
                       : static_cast<double>(negatives) / static_cast<double>(positives));

    double reg = 0.0;
    for (double w : classifier.weights) {
        reg += w * w;
    }
    double total = 0.5 * config.lambda * reg;
    double hinge = 0.0;
    for (const auto& example : examples) {
        const double y = example.positive ? 1.0 : -1.0;
        const double c = example.positive ? pos_weight : 1.0;
        double margin = classifier.bias;
        for (std::size_t j = 0; j < example.features.size(); ++j) {
            margin += classifier.weights[j] * example.features[j];
        }
        hinge += c * std::max(0.0, 1.0 - y * margin);
    }
    return total + hinge / static_cast<double>(examples.size());
}

LabelVector predict_tags(const RestaurantProfile& profile,
                         const std::vector<TagClassifier>& classifiers) {
    if (profile.features.size() != classifiers.size()) {
        throw ValidationError("profile tag count does not match classifier count");
    }
    LabelVector labels = LabelVector::zeros(classifiers.size());
    for (std::size_t t = 0; t < classifiers.size(); ++t) {
        const auto& feat = profile.features[t];
        const auto& clf = classifiers[t];
        if (feat.size() != clf.weights.size()) {
            throw ValidationError("feature length does not match classifier weights");
        }
        double decision = clf.bias;
        for (std::size_t j = 0; j < feat.size(); ++j) {
            decision += clf.weights[j] * feat[j];
        }
        labels.set(t, decision > 0.0);
    }
    return labels;
}

std::vector<RestaurantProfile> build_profiles(const ScoreTable& scores,
                                              std::size_t k, double pad_value) {
    std::vector<RestaurantProfile> profiles;
    profiles.reserve(scores.rows().size());
    for (const auto& row : scores.rows()) {
        profiles.push_back(extract_features(row.bag_id, row.scores, k, pad_value));
    }
    return profiles;
}

std::vector<TagClassifier> profile_pipeline(const Dataset& dataset, const ScorerModel& model,
                                            const ProfileConfig& config) {
    config.validate();
    dataset.validate();

    const ScoreTable scores = score_dataset(model, dataset);
    const std::vector<RestaurantProfile> profiles =
        build_profiles(scores, config.k, config.pad_value);

    std::vector<TagClassifier> classifiers;
    classifiers.reserve(dataset.num_tags());
    for (std::size_t t = 0; t < dataset.num_tags(); ++t) {
        std::vector<TagExample> examples;
        examples.reserve(dataset.bags.size());
        for (std::size_t n = 0; n < dataset.bags.size(); ++n) {
            examples.push_back(TagExample{profiles[n].features[t],
                                          dataset.bags[n].labels.test(t)});
        }
        classifiers.push_back(train_tag_classifier(t, examples, config.svm));
    }
    return classifiers;
}

void save_classifiers(const std::vector<TagClassifier>& classifiers,
                      const TagVocabulary& vocabulary, std::size_t k,
                      const std::string& path) {
    nlohmann::json obj;
    obj["format_version"] = 1;
    obj["kind"] = "miml_tag_classifiers";
    obj["k"] = k;
    obj["tags"] = vocabulary.names();
    nlohmann::json list = nlohmann::json::array();
    for (const auto& clf : classifiers) {
        nlohmann::json entry;
        entry["tag"] = clf.tag;
        entry["weights"] = clf.weights;
        entry["bias"] = clf.bias;
        list.push_back(std::move(entry));
    }
    obj["classifiers"] = std::move(list);

    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open file for writing: " + path);
    }
    out << obj.dump(2) << '\n';
    if (!out) {
        throw Error("I/O error while writing: " + path);
    }
}

LoadedClassifiers load_classifiers(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open classifier file: " + path);
    }
    nlohmann::json obj = nlohmann::json::parse(in, nullptr, false);
    if (obj.is_discarded()) {
        throw ParseError("classifier file is not valid JSON: " + path);
    }
    if (obj.value("kind", "") != "miml_tag_classifiers" || obj.value("format_version", 0) != 1) {
        throw ParseError("unsupported classifier file: " + path);
    }

    LoadedClassifiers loaded;
    loaded.k = obj.at("k").get<std::size_t>();
    loaded.tag_names = obj.at("tags").get<std::vector<std::string>>();
    for (const auto& entry : obj.at("classifiers")) {
        TagClassifier clf;
        clf.tag = entry.at("tag").get<std::size_t>();
        clf.weights = entry.at("weights").get<std::vector<double>>();
        clf.bias = entry.at("bias").get<double>();
        if (clf.weights.size() != loaded.k) {
            throw ParseError("classifier weight length does not match k");
        }
        loaded.classifiers.push_back(std::move(clf));
    }
    if (loaded.classifiers.size() != loaded.tag_names.size()) {
        throw ParseError("classifier count does not match tag count");
    }
    return loaded;
}

} // namespace miml
