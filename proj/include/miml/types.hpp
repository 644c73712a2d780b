#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace miml {

// Error hierarchy used across the library. ParseError/ValidationError map to
// bad input files or malformed in-memory objects, TrainingError to diverged
// optimization runs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

// Ordered set of tag names. L == size().
class TagVocabulary {
public:
    TagVocabulary() = default;

    // Throws ValidationError unless names are non-empty, unique and at least one.
    explicit TagVocabulary(std::vector<std::string> names);

    // The nine TripAdvisor restaurant styles.
    static TagVocabulary tripadvisor_styles();

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t t) const { return names_.at(t); }

    bool operator==(const TagVocabulary&) const = default;

private:
    std::vector<std::string> names_;
};

// Binary tag assignment y^t over L tags. Elements are checked to be 0/1 at
// construction; length checks against the active vocabulary happen wherever a
// LabelVector meets a Dataset.
class LabelVector {
public:
    LabelVector() = default;
    explicit LabelVector(std::vector<std::uint8_t> bits);

    static LabelVector zeros(std::size_t count);

    std::size_t size() const { return bits_.size(); }
    bool test(std::size_t t) const { return bits_.at(t) != 0; }
    void set(std::size_t t, bool on) { bits_.at(t) = on ? 1 : 0; }
    std::size_t count() const;

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool operator==(const LabelVector&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Per-tag confidence scores s^t. All values must be finite.
class ScoreVector {
public:
    ScoreVector() = default;
    explicit ScoreVector(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t t) const { return values_.at(t); }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const ScoreVector&) const = default;

private:
    std::vector<double> values_;
};

// One photo, represented as a dense feature vector.
struct Instance {
    std::string id;
    std::vector<double> features;

    bool operator==(const Instance&) const = default;
};

// One restaurant: a set of instances sharing a bag-level label vector.
struct Bag {
    std::string id;
    std::vector<Instance> instances;
    LabelVector labels;

    std::size_t size() const { return instances.size(); }

    bool operator==(const Bag&) const = default;
};

struct Dataset {
    TagVocabulary vocabulary;
    std::size_t feature_dim = 0;
    std::vector<Bag> bags;

    std::size_t num_tags() const { return vocabulary.size(); }
    std::size_t num_bags() const { return bags.size(); }
    std::size_t total_instances() const;

    // Checks every structural invariant: N >= 1, unique bag ids, M_n >= 1,
    // instance ids unique within each bag, label length == L, feature
    // length == feature_dim, all features finite. Throws ValidationError.
    void validate() const;

    bool operator==(const Dataset&) const = default;
};

} // namespace miml
