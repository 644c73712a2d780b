#include "miml/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace miml {

TagVocabulary::TagVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
    if (names_.empty()) {
        throw ValidationError("tag vocabulary must contain at least one tag");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
        if (name.empty()) {
            throw ValidationError("tag names must be non-empty");
        }
        if (!seen.insert(name).second) {
            throw ValidationError("duplicate tag name: " + name);
        }
    }
}

TagVocabulary TagVocabulary::tripadvisor_styles() {
    return TagVocabulary({
        "Bar scene",
        "Business meeting",
        "Dining on a budget",
        "Families with children",
        "Large groups",
        "Local cuisine",
        "Romantic",
        "Scenic view",
        "Special occasions",
    });
}

LabelVector::LabelVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b != 0 && b != 1) {
            throw ValidationError("label vector elements must be 0 or 1");
        }
    }
}

LabelVector LabelVector::zeros(std::size_t count) {
    LabelVector v;
    v.bits_.assign(count, 0);
    return v;
}

std::size_t LabelVector::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

ScoreVector::ScoreVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ValidationError("score vector elements must be finite");
        }
    }
}

std::size_t Dataset::total_instances() const {
    std::size_t total = 0;
    for (const auto& bag : bags) {
        total += bag.instances.size();
    }
    return total;
}

void Dataset::validate() const {
    if (vocabulary.size() == 0) {
        throw ValidationError("dataset has an empty tag vocabulary");
    }
    if (feature_dim == 0) {
        throw ValidationError("dataset feature dimension must be at least 1");
    }
    if (bags.empty()) {
        throw ValidationError("dataset must contain at least one bag");
    }
    std::unordered_set<std::string> bag_ids;
    for (const auto& bag : bags) {
        if (bag.id.empty()) {
            throw ValidationError("bag ids must be non-empty");
        }
        if (!bag_ids.insert(bag.id).second) {
            throw ValidationError("duplicate bag id: " + bag.id);
        }
        if (bag.instances.empty()) {
            throw ValidationError("bag '" + bag.id + "' has no instances");
        }
        if (bag.labels.size() != vocabulary.size()) {
            throw ValidationError("bag '" + bag.id + "' has label length " +
                                  std::to_string(bag.labels.size()) + ", expected " +
                                  std::to_string(vocabulary.size()));
        }
        std::unordered_set<std::string> instance_ids;
        for (const auto& instance : bag.instances) {
            if (instance.id.empty()) {
                throw ValidationError("bag '" + bag.id + "' has an instance with an empty id");
            }
            if (!instance_ids.insert(instance.id).second) {
                throw ValidationError("bag '" + bag.id + "' has duplicate instance id: " +
                                      instance.id);
            }
            if (instance.features.size() != feature_dim) {
                throw ValidationError("instance '" + instance.id + "' in bag '" + bag.id +
                                      "' has feature length " +
                                      std::to_string(instance.features.size()) + ", expected " +
                                      std::to_string(feature_dim));
            }
            for (double f : instance.features) {
                if (!std::isfinite(f)) {
                    throw ValidationError("instance '" + instance.id + "' in bag '" + bag.id +
                                          "' has a non-finite feature");
                }
            }
        }
    }
}

} // namespace miml
