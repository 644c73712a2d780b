#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "miml/types.hpp"

namespace miml {

// Deterministic generator of MIML bags with planted informative instances.
// Each tag gets a random unit prototype direction; a bag positive for a tag
// carries a block of instances near separation * prototype, the rest draw
// from shared zero-mean background noise.
struct SynthConfig {
    std::size_t num_bags = 100;
    std::size_t num_tags = 4;
    std::size_t feature_dim = 16;
    std::size_t min_instances = 20;
    std::size_t max_instances = 60;
    double informative_fraction = 0.25; // of a bag's instances, per positive tag
    std::size_t min_informative = 3;    // m_t: instances needed to make a bag positive
    double prototype_separation = 2.0;
    double feature_noise = 1.0;
    double tag_prior = 0.3;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

// Ground-truth informativeness flags, hidden from training but available to
// tests. A bag is positive for tag t iff at least min_informative of its
// instances are flagged informative for t; emitted labels obey this rule by
// construction.
struct SynthTruth {
    std::vector<std::vector<LabelVector>> flags; // [bag][instance] -> L flags
};

std::pair<Dataset, SynthTruth> generate(const SynthConfig& config);

// Sidecar truth file: same JSON Lines structure as the dataset, with
// per-instance "informative" flag arrays instead of features.
void save_truth(const SynthTruth& truth, const Dataset& dataset, const std::string& path);

} // namespace miml
