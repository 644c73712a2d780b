#pragma once

#include <vector>

#include "miml/scorer.hpp"
#include "miml/types.hpp"

namespace miml {

struct BaselineConfig {
    std::size_t k_prime = 1;       // tags assigned to each photo
    double vote_fraction = 0.5;    // a tag wins when strictly more than this fraction of photos carry it

    // num_tags-aware validation: 1 <= k_prime <= L, vote_fraction in (0, 1].
    void validate(std::size_t num_tags) const;
};

// Single-round comparison method: each photo gets its k' highest-scoring tags
// (ties broken by lower tag index), and a bag is labeled with every tag that
// strictly more than vote_fraction of its photos carry.
LabelVector baseline_predict(const std::vector<ScoreVector>& bag_scores,
                             const BaselineConfig& config);

} // namespace miml
