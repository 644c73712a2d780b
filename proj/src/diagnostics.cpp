#include "miml/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace miml {

namespace {

// Shortest round-trip decimal form, so emitted CSVs are byte-stable.
std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

bool bag_has_tag(const std::map<std::string, LabelVector>& bag_labels,
                 const std::string& bag_id, std::size_t tag) {
    auto it = bag_labels.find(bag_id);
    if (it == bag_labels.end()) {
        throw ValidationError("no bag labels for bag '" + bag_id + "'");
    }
    return it->second.test(tag);
}

} // namespace

EvaluationResult evaluate(const std::map<std::string, LabelVector>& predicted,
                          const std::map<std::string, LabelVector>& truth) {
    if (predicted.size() != truth.size()) {
        throw ValidationError("predicted and truth cover different numbers of bags");
    }
    std::size_t num_tags = 0;
    for (const auto& [bag_id, labels] : truth) {
        auto it = predicted.find(bag_id);
        if (it == predicted.end()) {
            throw ValidationError("no prediction for bag '" + bag_id + "'");
        }
        if (it->second.size() != labels.size()) {
            throw ValidationError("prediction for bag '" + bag_id +
                                  "' has the wrong label length");
        }
        num_tags = labels.size();
    }
    if (truth.empty()) {
        throw ValidationError("evaluate needs at least one bag");
    }

    EvaluationResult result;
    result.per_tag.resize(num_tags);
    for (std::size_t t = 0; t < num_tags; ++t) {
        TagMetrics& m = result.per_tag[t];
        m.tag = t;
        for (const auto& [bag_id, labels] : truth) {
            const bool actual = labels.test(t);
            const bool guessed = predicted.at(bag_id).test(t);
            if (guessed && actual) {
                ++m.tp;
            } else if (guessed && !actual) {
                ++m.fp;
            } else if (!guessed && actual) {
                ++m.fn;
            }
        }
        if (m.tp + m.fp > 0) {
            m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
        }
        if (m.tp + m.fn > 0) {
            m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
        }
        if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0) {
            m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
        }
    }

    auto macro_of = [&](auto getter) -> std::optional<double> {
        double sum = 0.0;
        std::size_t defined = 0;
        for (const auto& m : result.per_tag) {
            if (auto v = getter(m)) {
                sum += *v;
                ++defined;
            }
        }
        if (defined == 0) {
            return std::nullopt;
        }
        return sum / static_cast<double>(defined);
    };
    result.macro.precision = macro_of([](const TagMetrics& m) { return m.precision; });
    result.macro.recall = macro_of([](const TagMetrics& m) { return m.recall; });
    result.macro.f1 = macro_of([](const TagMetrics& m) { return m.f1; });
    return result;
}

ConditionalCurve conditional_curves(const ScoreTable& instance_scores,
                                    const std::map<std::string, LabelVector>& bag_labels,
                                    std::size_t tag, const std::vector<double>& thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw ValidationError("thresholds must be sorted ascending");
    }
    ConditionalCurve curve;
    curve.tag = tag;
    curve.thresholds = thresholds;
    curve.count_tag_above.assign(thresholds.size(), 0);
    curve.count_above.assign(thresholds.size(), 0);
    curve.count_no_tag_below.assign(thresholds.size(), 0);
    curve.count_below.assign(thresholds.size(), 0);

    for (const auto& row : instance_scores.rows()) {
        const bool has_tag = bag_has_tag(bag_labels, row.bag_id, tag);
        for (const auto& scores : row.scores) {
            const double x = scores[tag];
            for (std::size_t i = 0; i < thresholds.size(); ++i) {
                if (x > thresholds[i]) {
                    ++curve.count_above[i];
                    if (has_tag) {
                        ++curve.count_tag_above[i];
                    }
                }
                if (x < thresholds[i]) {
                    ++curve.count_below[i];
                    if (!has_tag) {
                        ++curve.count_no_tag_below[i];
                    }
                }
            }
        }
    }

    curve.upper.resize(thresholds.size());
    curve.lower.resize(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (curve.count_above[i] > 0) {
            curve.upper[i] = static_cast<double>(curve.count_tag_above[i]) /
                             static_cast<double>(curve.count_above[i]);
        }
        if (curve.count_below[i] > 0) {
            curve.lower[i] = static_cast<double>(curve.count_no_tag_below[i]) /
                             static_cast<double>(curve.count_below[i]);
        }
    }
    return curve;
}

std::vector<double> default_threshold_grid(const ScoreTable& instance_scores, std::size_t tag,
                                           std::size_t points) {
    if (points < 1) {
        throw ValidationError("threshold grid needs at least one point");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : instance_scores.rows()) {
        for (const auto& scores : row.scores) {
            lo = std::min(lo, scores[tag]);
            hi = std::max(hi, scores[tag]);
        }
    }
    if (!std::isfinite(lo)) {
        throw ValidationError("score table is empty");
    }
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = (lo + hi) / 2.0;
        return grid;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    return grid;
}

ScoreHistogram score_histogram(const ScoreTable& instance_scores,
                               const std::map<std::string, LabelVector>& bag_labels,
                               std::size_t tag, std::size_t bins) {
    if (bins < 1) {
        throw ValidationError("histogram needs at least one bin");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : instance_scores.rows()) {
        for (const auto& scores : row.scores) {
            lo = std::min(lo, scores[tag]);
            hi = std::max(hi, scores[tag]);
        }
    }
    if (!std::isfinite(lo)) {
        throw ValidationError("score table is empty");
    }

    ScoreHistogram histogram;
    histogram.tag = tag;
    histogram.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        histogram.edges[i] = lo + width * static_cast<double>(i);
    }
    histogram.edges.back() = hi;
    histogram.positive.assign(bins, 0);
    histogram.negative.assign(bins, 0);

    for (const auto& row : instance_scores.rows()) {
        const bool has_tag = bag_has_tag(bag_labels, row.bag_id, tag);
        for (const auto& scores : row.scores) {
            const double x = scores[tag];
            std::size_t bin;
            if (width > 0.0) {
                bin = static_cast<std::size_t>((x - lo) / width);
                bin = std::min(bin, bins - 1); // x == hi lands in the last bin
            } else {
                bin = 0; // all scores equal
            }
            if (has_tag) {
                ++histogram.positive[bin];
            } else {
                ++histogram.negative[bin];
            }
        }
    }
    return histogram;
}

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& positives) {
    if (scores.size() != positives.size()) {
        throw ValidationError("auc: scores and labels differ in length");
    }
    // Rank-sum (Mann-Whitney) formulation with average ranks on ties.
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t num_positive = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + j + 1); // ranks are 1-based
        for (std::size_t r = i; r < j; ++r) {
            if (positives[order[r]]) {
                positive_rank_sum += avg_rank;
                ++num_positive;
            }
        }
        i = j;
    }
    const std::size_t num_negative = scores.size() - num_positive;
    if (num_positive == 0 || num_negative == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double u = positive_rank_sum -
                     static_cast<double>(num_positive) * (static_cast<double>(num_positive) + 1.0) / 2.0;
    return u / (static_cast<double>(num_positive) * static_cast<double>(num_negative));
}

double score_auc(const ScoreTable& instance_scores,
                 const std::map<std::string, LabelVector>& bag_labels, std::size_t tag) {
    std::vector<double> scores;
    std::vector<std::uint8_t> positives;
    scores.reserve(instance_scores.total_entries());
    positives.reserve(instance_scores.total_entries());
    for (const auto& row : instance_scores.rows()) {
        const bool has_tag = bag_has_tag(bag_labels, row.bag_id, tag);
        for (const auto& sv : row.scores) {
            scores.push_back(sv[tag]);
            positives.push_back(has_tag ? 1 : 0);
        }
    }
    return auc(scores, positives);
}

void write_metrics_csv(const EvaluationResult& result, const TagVocabulary& vocabulary,
                       std::ostream& out) {
    out << "tag,tp,fp,fn,recall,precision,f1\n";
    for (const auto& m : result.per_tag) {
        const std::string name =
            m.tag < vocabulary.size() ? vocabulary.name(m.tag) : std::to_string(m.tag);
        out << name << ',' << m.tp << ',' << m.fp << ',' << m.fn << ','
            << format_optional(m.recall) << ',' << format_optional(m.precision) << ','
            << format_optional(m.f1) << '\n';
    }
    out << "average,,,," << format_optional(result.macro.recall) << ','
        << format_optional(result.macro.precision) << ',' << format_optional(result.macro.f1)
        << '\n';
}

void write_curve_csv(const ConditionalCurve& curve, std::ostream& out) {
    out << "threshold,p_tag_given_above,count_tag_above,count_above,"
           "p_no_tag_given_below,count_no_tag_below,count_below\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << format_double(curve.thresholds[i]) << ',' << format_optional(curve.upper[i])
            << ',' << curve.count_tag_above[i] << ',' << curve.count_above[i] << ','
            << format_optional(curve.lower[i]) << ',' << curve.count_no_tag_below[i] << ','
            << curve.count_below[i] << '\n';
    }
}

void write_histogram_csv(const ScoreHistogram& histogram, std::ostream& out) {
    out << "bin_lo,bin_hi,positive,negative\n";
    for (std::size_t i = 0; i + 1 < histogram.edges.size(); ++i) {
        out << format_double(histogram.edges[i]) << ',' << format_double(histogram.edges[i + 1])
            << ',' << histogram.positive[i] << ',' << histogram.negative[i] << '\n';
    }
}

} // namespace miml
