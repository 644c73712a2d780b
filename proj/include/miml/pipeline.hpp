#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "miml/baseline.hpp"
#include "miml/diagnostics.hpp"
#include "miml/profiler.hpp"
#include "miml/pseudotag.hpp"
#include "miml/scorer.hpp"
#include "miml/types.hpp"

namespace miml {

struct SweepGrids {
    std::vector<std::size_t> k;
    std::vector<std::size_t> k_prime;
    std::vector<std::size_t> min_instances;
};

// Everything an experiment run needs. Serializable to/from a JSON config
// file; CLI flags override individual fields.
struct ExperimentConfig {
    std::size_t folds = 5;
    std::size_t min_instances = 1; // evaluation-time filter on test bags
    std::uint64_t seed = 1;

    ScorerConfig scorer;                       // round 1; per-fold seeds derive from rng_seed + fold
    std::optional<ScorerConfig> scorer_round2; // unset: round-1 config with a shifted seed
    bool round2_warm_start = false;            // continue from round-1 parameters instead of re-initializing

    // Unset: one standard deviation of the round-1 training scores (pooled
    // over tags), the documented per-dataset heuristic.
    std::optional<double> stop_margin;
    std::optional<std::size_t> max_flips_per_tag;

    ProfileConfig profile;
    BaselineConfig baseline;
    SweepGrids sweep;

    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& obj);
};

// Deterministic bag-level partition: fold_of[i] in [0, folds).
std::vector<std::size_t> assign_folds(std::size_t num_bags, std::size_t folds,
                                      std::uint64_t seed);

struct FoldArtifacts {
    std::size_t fold = 0;
    bool failed = false;
    std::string error;
    std::vector<std::string> train_bag_ids;
    std::vector<std::string> test_bag_ids;
    ScorerModel round1;
    ScorerModel round2;
    PseudoTagReport pseudo_report;
    double stop_margin_used = 0.0;
};

struct PipelineResult {
    EvaluationResult proposed;
    EvaluationResult baseline;
    std::vector<double> auc_round1; // per tag, pooled test-fold instance scores
    std::vector<double> auc_round2;
    std::vector<FoldArtifacts> folds;
    nlohmann::json report; // the full Table-III-shaped report
};

// Full two-round pipeline under bag-level cross-validation: per fold, train
// the round-1 scorer on bag-inherited labels, pseudo-tag, train the round-2
// scorer on the relabeled instances, fit per-tag classifiers on the training
// fold and predict the test fold; the baseline runs on the same folds from
// the round-1 model. Test predictions pool across folds into one evaluation.
PipelineResult run_pipeline(const Dataset& dataset, const ExperimentConfig& config);

struct SweepResult {
    std::vector<std::size_t> k_values;
    std::vector<std::size_t> k_prime_values;
    std::vector<std::size_t> min_values;
    // Macro-average F1; NaN marks an undefined macro.
    std::vector<std::vector<double>> proposed_f1; // [min][k]
    std::vector<std::vector<double>> baseline_f1; // [min][k']

    std::string proposed_csv() const;
    std::string baseline_csv() const;
};

// Fig.-5-style grid: scorers are trained once per fold and reused across the
// whole grid (they do not depend on k); classifiers are retrained per k and
// the min_instances filter applies at evaluation time.
SweepResult run_sweep(const Dataset& dataset, const ExperimentConfig& config);

// Emits, into out_dir: per-tag conditional-probability curves over round-1
// scores, per-tag score histograms for both rounds, and a per-tag AUC
// summary. Returns the number of files written.
std::size_t run_diagnostics(const Dataset& dataset, const ScorerModel& round1,
                            const ScorerModel& round2, const std::string& out_dir,
                            std::size_t threshold_points = 64, std::size_t bins = 40);

} // namespace miml
