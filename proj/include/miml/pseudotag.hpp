#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "miml/scorer.hpp"
#include "miml/types.hpp"

namespace miml {

struct PseudoTagConfig {
    // Stop threshold on s_add - s_remove. Finite; may be negative, in which
    // case max_flips_per_tag bounds the loop.
    double stop_margin = 0.0;
    // Safety cap on paired flips per tag; unset means the candidate pools are
    // the only bound. Hitting the cap is reported, not an error.
    std::optional<std::size_t> max_flips_per_tag;
};

struct TagFlipStats {
    std::size_t adds = 0;       // labels flipped 0 -> 1
    std::size_t removes = 0;    // labels flipped 1 -> 0
    std::size_t iterations = 0; // candidate pairs examined (flipped or not)
    std::optional<double> final_margin; // margin of the last examined pair
    bool cap_hit = false;
};

struct PseudoTagReport {
    struct Flip {
        std::size_t tag = 0;
        std::size_t added_index = 0;   // position in the input sequence
        std::size_t removed_index = 0;
    };

    std::vector<TagFlipStats> per_tag;
    std::vector<Flip> flips;

    std::size_t total_flips() const { return flips.size(); }
};

// JSON audit form of the report (per-tag adds/removes/iterations/final margin).
std::string report_to_json(const PseudoTagReport& report, const TagVocabulary& vocabulary);

// Every instance inherits its bag's label vector; output is bag order then
// instance order.
std::vector<TaggedInstance> initialize_instance_labels(const Dataset& dataset);

// Paired label re-estimation from fixed round-1 scores. For each tag
// independently: repeatedly pair the highest-scoring unlabeled instance with
// the lowest-scoring labeled one and flip both, until the score gap no longer
// exceeds stop_margin (the failing pair is left untouched) or a pool runs
// out. Ties break by position in the input sequence. Throws Error if any
// instance lacks a score entry.
std::pair<std::vector<TaggedInstance>, PseudoTagReport>
pseudo_tag(const std::vector<TaggedInstance>& data, const ScoreTable& scores,
           const PseudoTagConfig& config);

} // namespace miml
