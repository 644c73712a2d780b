#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "miml/scorer.hpp"
#include "miml/types.hpp"

namespace miml {

// L2-regularized hinge loss trained by deterministic sub-gradient descent
// with the 1/(lambda * step) rate schedule.
struct SvmConfig {
    double lambda = 1e-3;
    std::size_t epochs = 200;
    double step_offset = 1.0; // rate at global step tau is 1 / (lambda * (step_offset + tau))
    std::uint64_t rng_seed = 1;
    // Weight on positive examples' hinge terms. Unset: #negatives / #positives
    // of the training set (several styles are rare).
    std::optional<double> positive_class_weight;

    void validate() const;
};

struct ProfileConfig {
    std::size_t k = 3;
    double pad_value = -10.0; // stands in for "no evidence" when a bag has fewer than k instances
    SvmConfig svm;

    void validate() const;
};

// Per-tag binary classifier C^t over top-k score features.
struct TagClassifier {
    std::size_t tag = 0;
    std::vector<double> weights; // length k
    double bias = 0.0;

    bool operator==(const TagClassifier&) const = default;
};

// Per-tag feature vectors F^t of one bag: the k largest instance scores on
// each tag, descending, padded with pad_value when the bag is small.
struct RestaurantProfile {
    std::string bag_id;
    std::vector<std::vector<double>> features; // L x k
};

RestaurantProfile extract_features(const std::string& bag_id,
                                   const std::vector<ScoreVector>& bag_scores,
                                   std::size_t k, double pad_value);

struct TagExample {
    std::vector<double> features; // length k
    bool positive = false;
};

// Throws ValidationError naming the tag when the training set is single-class.
TagClassifier train_tag_classifier(std::size_t tag, const std::vector<TagExample>& examples,
                                   const SvmConfig& config);

// Regularized per-example hinge objective of a classifier on a training set;
// the quantity the trainer minimizes.
double hinge_objective(const TagClassifier& classifier, const std::vector<TagExample>& examples,
                       const SvmConfig& config);

// y^t = 1 iff w^t . F^t + b^t > 0 (a tie at exactly 0 reads as 0).
LabelVector predict_tags(const RestaurantProfile& profile,
                         const std::vector<TagClassifier>& classifiers);

// Profiles for every bag covered by the score table, in table order.
std::vector<RestaurantProfile> build_profiles(const ScoreTable& scores,
                                              std::size_t k, double pad_value);

// Full restaurant-profiling pass: score every instance with the model, build
// per-bag top-k features, train one classifier per tag against the bag labels.
std::vector<TagClassifier> profile_pipeline(const Dataset& dataset, const ScorerModel& model,
                                            const ProfileConfig& config);

// Versioned JSON persistence: one {tag, weights, bias} object per tag.
void save_classifiers(const std::vector<TagClassifier>& classifiers,
                      const TagVocabulary& vocabulary, std::size_t k,
                      const std::string& path);
struct LoadedClassifiers {
    std::vector<TagClassifier> classifiers;
    std::vector<std::string> tag_names;
    std::size_t k = 0;
};
LoadedClassifiers load_classifiers(const std::string& path);

} // namespace miml
