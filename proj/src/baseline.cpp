#include "miml/baseline.hpp"

#include <algorithm>
#include <numeric>

namespace miml {

void BaselineConfig::validate(std::size_t num_tags) const {
    if (k_prime < 1 || k_prime > num_tags) {
        throw ValidationError("k_prime must lie in [1, L]");
    }
    if (!(vote_fraction > 0.0) || vote_fraction > 1.0) {
        throw ValidationError("vote_fraction must lie in (0, 1]");
    }
}

LabelVector baseline_predict(const std::vector<ScoreVector>& bag_scores,
                             const BaselineConfig& config) {
    if (bag_scores.empty()) {
        throw ValidationError("baseline_predict needs a non-empty bag");
    }
    const std::size_t num_tags = bag_scores.front().size();
    config.validate(num_tags);

    std::vector<std::size_t> votes(num_tags, 0);
    std::vector<std::size_t> order(num_tags);
    for (const auto& scores : bag_scores) {
        if (scores.size() != num_tags) {
            throw ValidationError("bag scores disagree on tag count");
        }
        std::iota(order.begin(), order.end(), 0);
        // Descending score, ascending tag index on ties.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a] > scores[b];
        });
        for (std::size_t r = 0; r < config.k_prime; ++r) {
            ++votes[order[r]];
        }
    }

    const double threshold = config.vote_fraction * static_cast<double>(bag_scores.size());
    LabelVector labels = LabelVector::zeros(num_tags);
    for (std::size_t t = 0; t < num_tags; ++t) {
        labels.set(t, static_cast<double>(votes[t]) > threshold);
    }
    return labels;
}

} // namespace miml
