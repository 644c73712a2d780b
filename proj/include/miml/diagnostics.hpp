#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "miml/scorer.hpp"
#include "miml/types.hpp"

namespace miml {

struct TagMetrics {
    std::size_t tag = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    // Unset when the denominator is zero; such tags are excluded from the
    // macro average rather than counted as 0 or 1.
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

struct MacroAverage {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

struct EvaluationResult {
    std::vector<TagMetrics> per_tag;
    MacroAverage macro;
};

// Per-tag counts over bags plus the unweighted mean of each metric over the
// tags where it is defined. Throws ValidationError when the key sets differ.
EvaluationResult evaluate(const std::map<std::string, LabelVector>& predicted,
                          const std::map<std::string, LabelVector>& truth);

// P(A_t | x > s) and P(not A_t | x < s) over individual photos (no
// per-restaurant aggregation), with the exact counts behind each ratio.
// Points with an empty denominator are flagged undefined.
struct ConditionalCurve {
    std::size_t tag = 0;
    std::vector<double> thresholds;
    std::vector<long> count_tag_above;    // C(A_t, x > s)
    std::vector<long> count_above;        // C(x > s)
    std::vector<long> count_no_tag_below; // C(not A_t, x < s)
    std::vector<long> count_below;        // C(x < s)
    std::vector<std::optional<double>> upper; // P(A_t | x > s)
    std::vector<std::optional<double>> lower; // P(not A_t | x < s)
};

ConditionalCurve conditional_curves(const ScoreTable& instance_scores,
                                    const std::map<std::string, LabelVector>& bag_labels,
                                    std::size_t tag, const std::vector<double>& thresholds);

// Evenly spaced thresholds between the minimum and maximum observed score on
// the tag.
std::vector<double> default_threshold_grid(const ScoreTable& instance_scores, std::size_t tag,
                                           std::size_t points = 64);

struct ScoreHistogram {
    std::size_t tag = 0;
    std::vector<double> edges;   // bins + 1 ascending edges
    std::vector<long> positive;  // photos from bags carrying the tag
    std::vector<long> negative;  // photos from bags without the tag
};

ScoreHistogram score_histogram(const ScoreTable& instance_scores,
                               const std::map<std::string, LabelVector>& bag_labels,
                               std::size_t tag, std::size_t bins);

// Area under the ROC of scores against binary labels (ties get half credit).
// Returns NaN when either class is empty.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& positives);

// AUC of instance scores on a tag against photo-level bag labels.
double score_auc(const ScoreTable& instance_scores,
                 const std::map<std::string, LabelVector>& bag_labels, std::size_t tag);

// CSV emitters; schemas are documented in the README and stable.
void write_metrics_csv(const EvaluationResult& result, const TagVocabulary& vocabulary,
                       std::ostream& out);
void write_curve_csv(const ConditionalCurve& curve, std::ostream& out);
void write_histogram_csv(const ScoreHistogram& histogram, std::ostream& out);

} // namespace miml
