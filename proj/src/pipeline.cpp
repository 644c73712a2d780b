#include "miml/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace miml {

namespace {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

json optional_to_json(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

Dataset subset_by_indices(const Dataset& dataset, const std::vector<std::size_t>& indices) {
    Dataset subset;
    subset.vocabulary = dataset.vocabulary;
    subset.feature_dim = dataset.feature_dim;
    subset.bags.reserve(indices.size());
    for (std::size_t i : indices) {
        subset.bags.push_back(dataset.bags[i]);
    }
    return subset;
}

double pooled_score_stddev(const ScoreTable& scores) {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (const auto& row : scores.rows()) {
        for (const auto& sv : row.scores) {
            for (double v : sv.values()) {
                sum += v;
                sum_sq += v * v;
                ++count;
            }
        }
    }
    if (count == 0) {
        return 0.0;
    }
    const double mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
    return std::sqrt(var);
}

// Everything computed once per fold that the k/min/k' grids can reuse.
struct FoldData {
    FoldArtifacts artifacts;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    ScoreTable scores2_train; // round-2 scores on training-fold instances
    ScoreTable scores1_test;  // round-1 scores on test-fold instances
    ScoreTable scores2_test;  // round-2 scores on test-fold instances
};

// Seeds for the two rounds stay in distinct per-fold streams.
constexpr std::uint64_t kRound2SeedOffset = 7919;

std::vector<FoldData> compute_folds(const Dataset& dataset, const ExperimentConfig& config) {
    dataset.validate();
    config.validate();
    if (config.folds > dataset.bags.size()) {
        throw ValidationError("more folds than bags");
    }

    const std::vector<std::size_t> fold_of =
        assign_folds(dataset.bags.size(), config.folds, config.seed);

    ScorerConfig round1_base = config.scorer;
    round1_base.feature_dim = dataset.feature_dim;
    round1_base.num_tags = dataset.num_tags();

    ScorerConfig round2_base = config.scorer_round2.value_or(round1_base);
    round2_base.feature_dim = dataset.feature_dim;
    round2_base.num_tags = dataset.num_tags();
    if (!config.scorer_round2) {
        round2_base.rng_seed = round1_base.rng_seed + kRound2SeedOffset;
    }

    std::vector<FoldData> folds(config.folds);
    for (std::size_t f = 0; f < config.folds; ++f) {
        FoldData& fold = folds[f];
        fold.artifacts.fold = f;
        for (std::size_t i = 0; i < dataset.bags.size(); ++i) {
            if (fold_of[i] == f) {
                fold.test_indices.push_back(i);
                fold.artifacts.test_bag_ids.push_back(dataset.bags[i].id);
            } else {
                fold.train_indices.push_back(i);
                fold.artifacts.train_bag_ids.push_back(dataset.bags[i].id);
            }
        }

        try {
            if (fold.test_indices.empty() || fold.train_indices.empty()) {
                throw ValidationError("fold " + std::to_string(f) +
                                      " has an empty train or test split");
            }
            const Dataset train_ds = subset_by_indices(dataset, fold.train_indices);
            const Dataset test_ds = subset_by_indices(dataset, fold.test_indices);

            ScorerConfig cfg1 = round1_base;
            cfg1.rng_seed = round1_base.rng_seed + f;
            const std::vector<TaggedInstance> inherited = initialize_instance_labels(train_ds);
            fold.artifacts.round1 = train(cfg1, inherited);

            const ScoreTable scores1_train = score_dataset(fold.artifacts.round1, train_ds);

            PseudoTagConfig pt;
            pt.stop_margin =
                config.stop_margin.value_or(pooled_score_stddev(scores1_train));
            pt.max_flips_per_tag = config.max_flips_per_tag;
            fold.artifacts.stop_margin_used = pt.stop_margin;
            auto [relabeled, report] = pseudo_tag(inherited, scores1_train, pt);
            fold.artifacts.pseudo_report = std::move(report);

            ScorerConfig cfg2 = round2_base;
            cfg2.rng_seed = round2_base.rng_seed + f;
            fold.artifacts.round2 =
                config.round2_warm_start
                    ? train_from(fold.artifacts.round1, cfg2, relabeled)
                    : train(cfg2, relabeled);

            fold.scores2_train = score_dataset(fold.artifacts.round2, train_ds);
            fold.scores1_test = score_dataset(fold.artifacts.round1, test_ds);
            fold.scores2_test = score_dataset(fold.artifacts.round2, test_ds);
        } catch (const Error& e) {
            fold.artifacts.failed = true;
            fold.artifacts.error = e.what();
        }
    }
    return folds;
}

// Classifiers per tag from one fold's training split at a given k.
std::vector<TagClassifier> train_fold_classifiers(const Dataset& dataset, const FoldData& fold,
                                                  const ProfileConfig& profile) {
    const std::vector<RestaurantProfile> profiles =
        build_profiles(fold.scores2_train, profile.k, profile.pad_value);
    std::unordered_map<std::string, const LabelVector*> labels_of;
    for (std::size_t i : fold.train_indices) {
        labels_of.emplace(dataset.bags[i].id, &dataset.bags[i].labels);
    }

    std::vector<TagClassifier> classifiers;
    for (std::size_t t = 0; t < dataset.num_tags(); ++t) {
        std::vector<TagExample> examples;
        examples.reserve(profiles.size());
        for (const auto& prof : profiles) {
            examples.push_back(TagExample{prof.features[t], labels_of.at(prof.bag_id)->test(t)});
        }
        classifiers.push_back(train_tag_classifier(t, examples, profile.svm));
    }
    return classifiers;
}

struct GridPredictions {
    // One pooled prediction per non-failed test bag.
    std::map<std::string, LabelVector> proposed;
    std::map<std::string, LabelVector> baseline;
    std::vector<std::string> failed_folds;
};

std::map<std::string, LabelVector> predict_proposed(const Dataset& dataset,
                                                    const std::vector<FoldData>& folds,
                                                    const ProfileConfig& profile) {
    std::map<std::string, LabelVector> predictions;
    for (const auto& fold : folds) {
        if (fold.artifacts.failed) {
            continue;
        }
        const std::vector<TagClassifier> classifiers =
            train_fold_classifiers(dataset, fold, profile);
        for (const auto& prof :
             build_profiles(fold.scores2_test, profile.k, profile.pad_value)) {
            predictions.emplace(prof.bag_id, predict_tags(prof, classifiers));
        }
    }
    return predictions;
}

std::map<std::string, LabelVector> predict_baseline(const std::vector<FoldData>& folds,
                                                    const BaselineConfig& config) {
    std::map<std::string, LabelVector> predictions;
    for (const auto& fold : folds) {
        if (fold.artifacts.failed) {
            continue;
        }
        for (const auto& row : fold.scores1_test.rows()) {
            predictions.emplace(row.bag_id, baseline_predict(row.scores, config));
        }
    }
    return predictions;
}

// Restricts predictions to test bags with at least min_instances instances
// and evaluates them against the bag labels.
EvaluationResult evaluate_predictions(const Dataset& dataset,
                                      const std::map<std::string, LabelVector>& predictions,
                                      std::size_t min_instances) {
    std::map<std::string, LabelVector> predicted;
    std::map<std::string, LabelVector> truth;
    for (const auto& bag : dataset.bags) {
        auto it = predictions.find(bag.id);
        if (it == predictions.end() || bag.instances.size() < min_instances) {
            continue;
        }
        predicted.emplace(bag.id, it->second);
        truth.emplace(bag.id, bag.labels);
    }
    if (truth.empty()) {
        throw ValidationError("no test bag passes the min_instances filter");
    }
    return evaluate(predicted, truth);
}

json metrics_to_json(const EvaluationResult& result, const TagVocabulary& vocabulary) {
    json per_tag = json::array();
    for (const auto& m : result.per_tag) {
        json entry;
        entry["tag"] = m.tag < vocabulary.size() ? vocabulary.name(m.tag)
                                                 : std::to_string(m.tag);
        entry["tp"] = m.tp;
        entry["fp"] = m.fp;
        entry["fn"] = m.fn;
        entry["recall"] = optional_to_json(m.recall);
        entry["precision"] = optional_to_json(m.precision);
        entry["f1"] = optional_to_json(m.f1);
        per_tag.push_back(std::move(entry));
    }
    json obj;
    obj["per_tag"] = std::move(per_tag);
    obj["average"] = {{"recall", optional_to_json(result.macro.recall)},
                      {"precision", optional_to_json(result.macro.precision)},
                      {"f1", optional_to_json(result.macro.f1)}};
    return obj;
}

} // namespace

void ExperimentConfig::validate() const {
    if (folds < 2) {
        throw ValidationError("cross-validation needs at least 2 folds");
    }
    if (min_instances < 1) {
        throw ValidationError("min_instances must be at least 1");
    }
    if (stop_margin && !std::isfinite(*stop_margin)) {
        throw ValidationError("stop_margin must be finite");
    }
    profile.validate();
    // Scorer dims are filled from the dataset; check only the optimizer here.
    if (!(scorer.learning_rate > 0.0) || scorer.batch_size < 1 || scorer.epochs < 1 ||
        scorer.momentum < 0.0 || scorer.momentum >= 1.0 || scorer.weight_decay < 0.0) {
        throw ValidationError("scorer config has out-of-range optimizer parameters");
    }
}

std::vector<std::size_t> assign_folds(std::size_t num_bags, std::size_t folds,
                                      std::uint64_t seed) {
    if (folds < 1) {
        throw ValidationError("folds must be at least 1");
    }
    std::vector<std::size_t> order(num_bags);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> fold_of(num_bags);
    for (std::size_t pos = 0; pos < num_bags; ++pos) {
        fold_of[order[pos]] = pos % folds;
    }
    return fold_of;
}

PipelineResult run_pipeline(const Dataset& dataset, const ExperimentConfig& config) {
    std::vector<FoldData> folds = compute_folds(dataset, config);

    PipelineResult result;
    result.proposed = evaluate_predictions(
        dataset, predict_proposed(dataset, folds, config.profile), config.min_instances);
    result.baseline = evaluate_predictions(dataset, predict_baseline(folds, config.baseline),
                                           config.min_instances);

    // Pooled test-fold instance scores against photo-level bag labels.
    const std::size_t num_tags = dataset.num_tags();
    std::map<std::string, LabelVector> bag_labels;
    for (const auto& bag : dataset.bags) {
        bag_labels.emplace(bag.id, bag.labels);
    }
    result.auc_round1.resize(num_tags);
    result.auc_round2.resize(num_tags);
    for (std::size_t t = 0; t < num_tags; ++t) {
        std::vector<double> s1, s2;
        std::vector<std::uint8_t> y;
        for (const auto& fold : folds) {
            if (fold.artifacts.failed) {
                continue;
            }
            for (const auto& row : fold.scores1_test.rows()) {
                const bool positive = bag_labels.at(row.bag_id).test(t);
                const auto& row2 = fold.scores2_test.bag(row.bag_id);
                for (std::size_t i = 0; i < row.scores.size(); ++i) {
                    s1.push_back(row.scores[i][t]);
                    s2.push_back(row2.scores[i][t]);
                    y.push_back(positive ? 1 : 0);
                }
            }
        }
        result.auc_round1[t] = auc(s1, y);
        result.auc_round2[t] = auc(s2, y);
    }

    // Leakage check: training stages saw no test-fold bag of their own fold,
    // and the test folds partition the dataset.
    bool leakage_ok = true;
    std::size_t covered = 0;
    for (const auto& fold : folds) {
        std::unordered_set<std::string> test_ids(fold.artifacts.test_bag_ids.begin(),
                                                 fold.artifacts.test_bag_ids.end());
        covered += test_ids.size();
        for (const auto& id : fold.artifacts.train_bag_ids) {
            if (test_ids.count(id)) {
                leakage_ok = false;
            }
        }
    }
    if (covered != dataset.bags.size()) {
        leakage_ok = false;
    }

    json report;
    report["format_version"] = 1;
    report["folds"] = config.folds;
    report["seed"] = config.seed;
    report["min_instances"] = config.min_instances;
    report["tags"] = dataset.vocabulary.names();
    report["num_bags"] = dataset.bags.size();
    report["num_instances"] = dataset.total_instances();
    report["baseline"] = metrics_to_json(result.baseline, dataset.vocabulary);
    report["proposed"] = metrics_to_json(result.proposed, dataset.vocabulary);
    json auc1 = json::array();
    json auc2 = json::array();
    for (std::size_t t = 0; t < num_tags; ++t) {
        auc1.push_back(result.auc_round1[t]);
        auc2.push_back(result.auc_round2[t]);
    }
    report["auc"] = {{"round1", std::move(auc1)}, {"round2", std::move(auc2)}};
    json fold_summaries = json::array();
    json failed = json::array();
    for (const auto& fold : folds) {
        json entry;
        entry["fold"] = fold.artifacts.fold;
        entry["train_bags"] = fold.artifacts.train_bag_ids.size();
        entry["test_bags"] = fold.artifacts.test_bag_ids.size();
        if (fold.artifacts.failed) {
            entry["error"] = fold.artifacts.error;
            failed.push_back(fold.artifacts.fold);
        } else {
            entry["stop_margin"] = fold.artifacts.stop_margin_used;
            entry["pseudo_tag_flips"] = fold.artifacts.pseudo_report.total_flips();
            entry["round1_final_loss"] = fold.artifacts.round1.epoch_losses.empty()
                                             ? json(nullptr)
                                             : json(fold.artifacts.round1.epoch_losses.back());
            entry["round2_final_loss"] = fold.artifacts.round2.epoch_losses.empty()
                                             ? json(nullptr)
                                             : json(fold.artifacts.round2.epoch_losses.back());
        }
        fold_summaries.push_back(std::move(entry));
    }
    report["fold_summaries"] = std::move(fold_summaries);
    report["failed_folds"] = std::move(failed);
    report["leakage_check"] = leakage_ok ? "ok" : "VIOLATED";
    result.report = std::move(report);

    for (auto& fold : folds) {
        result.folds.push_back(std::move(fold.artifacts));
    }
    return result;
}

SweepResult run_sweep(const Dataset& dataset, const ExperimentConfig& config) {
    if (config.sweep.k.empty() || config.sweep.min_instances.empty()) {
        throw ValidationError("sweep needs non-empty k and min_instances grids");
    }
    const std::vector<FoldData> folds = compute_folds(dataset, config);

    SweepResult result;
    result.k_values = config.sweep.k;
    result.k_prime_values = config.sweep.k_prime;
    result.min_values = config.sweep.min_instances;

    auto macro_f1 = [](const EvaluationResult& ev) {
        return ev.macro.f1.value_or(std::numeric_limits<double>::quiet_NaN());
    };

    result.proposed_f1.assign(result.min_values.size(),
                              std::vector<double>(result.k_values.size(), 0.0));
    for (std::size_t ki = 0; ki < result.k_values.size(); ++ki) {
        ProfileConfig profile = config.profile;
        profile.k = result.k_values[ki];
        const auto predictions = predict_proposed(dataset, folds, profile);
        for (std::size_t mi = 0; mi < result.min_values.size(); ++mi) {
            result.proposed_f1[mi][ki] = macro_f1(
                evaluate_predictions(dataset, predictions, result.min_values[mi]));
        }
    }

    result.baseline_f1.assign(result.min_values.size(),
                              std::vector<double>(result.k_prime_values.size(), 0.0));
    for (std::size_t ki = 0; ki < result.k_prime_values.size(); ++ki) {
        BaselineConfig baseline = config.baseline;
        baseline.k_prime = result.k_prime_values[ki];
        const auto predictions = predict_baseline(folds, baseline);
        for (std::size_t mi = 0; mi < result.min_values.size(); ++mi) {
            result.baseline_f1[mi][ki] = macro_f1(
                evaluate_predictions(dataset, predictions, result.min_values[mi]));
        }
    }
    return result;
}

namespace {

std::string grid_csv(const std::string& column_name, const std::vector<std::size_t>& columns,
                     const std::vector<std::size_t>& rows,
                     const std::vector<std::vector<double>>& values) {
    std::ostringstream out;
    out << "min_instances";
    for (std::size_t c : columns) {
        out << ',' << column_name << '=' << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << rows[r];
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << ',';
            if (!std::isnan(values[r][c])) {
                out << format_double(values[r][c]);
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string SweepResult::proposed_csv() const {
    return grid_csv("k", k_values, min_values, proposed_f1);
}

std::string SweepResult::baseline_csv() const {
    return grid_csv("k_prime", k_prime_values, min_values, baseline_f1);
}

std::size_t run_diagnostics(const Dataset& dataset, const ScorerModel& round1,
                            const ScorerModel& round2, const std::string& out_dir,
                            std::size_t threshold_points, std::size_t bins) {
    dataset.validate();
    std::filesystem::create_directories(out_dir);

    std::map<std::string, LabelVector> bag_labels;
    for (const auto& bag : dataset.bags) {
        bag_labels.emplace(bag.id, bag.labels);
    }

    const ScoreTable scores1 = score_dataset(round1, dataset);
    const ScoreTable scores2 = score_dataset(round2, dataset);

    auto open = [&](const std::string& name) {
        std::ofstream out(std::filesystem::path(out_dir) / name);
        if (!out) {
            throw Error("cannot open file for writing: " + name);
        }
        return out;
    };

    std::size_t files = 0;
    std::ostringstream auc_csv;
    auc_csv << "tag,auc_round1,auc_round2\n";
    for (std::size_t t = 0; t < dataset.num_tags(); ++t) {
        const std::string suffix = "_tag" + std::to_string(t) + ".csv";
        {
            auto out = open("curve_round1" + suffix);
            write_curve_csv(conditional_curves(scores1, bag_labels, t,
                                               default_threshold_grid(scores1, t,
                                                                      threshold_points)),
                            out);
            ++files;
        }
        {
            auto out = open("hist_round1" + suffix);
            write_histogram_csv(score_histogram(scores1, bag_labels, t, bins), out);
            ++files;
        }
        {
            auto out = open("hist_round2" + suffix);
            write_histogram_csv(score_histogram(scores2, bag_labels, t, bins), out);
            ++files;
        }
        auc_csv << dataset.vocabulary.name(t) << ','
                << format_double(score_auc(scores1, bag_labels, t)) << ','
                << format_double(score_auc(scores2, bag_labels, t)) << '\n';
    }
    {
        auto out = open("auc.csv");
        out << auc_csv.str();
        ++files;
    }
    return files;
}

namespace {

ScorerConfig scorer_config_from_json(const json& obj, const ScorerConfig& base) {
    ScorerConfig cfg = base;
    if (obj.contains("hidden_widths")) {
        cfg.hidden_widths = obj["hidden_widths"].get<std::vector<std::size_t>>();
    }
    if (obj.contains("learning_rate")) {
        cfg.learning_rate = obj["learning_rate"].get<double>();
    }
    if (obj.contains("batch_size")) {
        cfg.batch_size = obj["batch_size"].get<std::size_t>();
    }
    if (obj.contains("momentum")) {
        cfg.momentum = obj["momentum"].get<double>();
    }
    if (obj.contains("weight_decay")) {
        cfg.weight_decay = obj["weight_decay"].get<double>();
    }
    if (obj.contains("epochs")) {
        cfg.epochs = obj["epochs"].get<std::size_t>();
    }
    if (obj.contains("rng_seed")) {
        cfg.rng_seed = obj["rng_seed"].get<std::uint64_t>();
    }
    return cfg;
}

json scorer_config_to_json(const ScorerConfig& cfg) {
    return json{{"hidden_widths", cfg.hidden_widths}, {"learning_rate", cfg.learning_rate},
                {"batch_size", cfg.batch_size},       {"momentum", cfg.momentum},
                {"weight_decay", cfg.weight_decay},   {"epochs", cfg.epochs},
                {"rng_seed", cfg.rng_seed}};
}

} // namespace

json ExperimentConfig::to_json() const {
    json obj;
    obj["folds"] = folds;
    obj["min_instances"] = min_instances;
    obj["seed"] = seed;
    obj["scorer"] = scorer_config_to_json(scorer);
    if (scorer_round2) {
        obj["scorer_round2"] = scorer_config_to_json(*scorer_round2);
    }
    obj["round2_warm_start"] = round2_warm_start;
    json pt;
    pt["stop_margin"] = stop_margin ? json(*stop_margin) : json("auto");
    pt["max_flips_per_tag"] =
        max_flips_per_tag ? json(*max_flips_per_tag) : json(nullptr);
    obj["pseudotag"] = std::move(pt);
    json svm;
    svm["lambda"] = profile.svm.lambda;
    svm["epochs"] = profile.svm.epochs;
    svm["step_offset"] = profile.svm.step_offset;
    svm["rng_seed"] = profile.svm.rng_seed;
    svm["positive_class_weight"] = profile.svm.positive_class_weight
                                       ? json(*profile.svm.positive_class_weight)
                                       : json(nullptr);
    obj["profile"] = {{"k", profile.k}, {"pad_value", profile.pad_value},
                      {"svm", std::move(svm)}};
    obj["baseline"] = {{"k_prime", baseline.k_prime},
                       {"vote_fraction", baseline.vote_fraction}};
    obj["sweep"] = {{"k", sweep.k}, {"k_prime", sweep.k_prime},
                    {"min_instances", sweep.min_instances}};
    return obj;
}

ExperimentConfig ExperimentConfig::from_json(const json& obj) {
    ExperimentConfig cfg;
    if (obj.contains("folds")) {
        cfg.folds = obj["folds"].get<std::size_t>();
    }
    if (obj.contains("min_instances")) {
        cfg.min_instances = obj["min_instances"].get<std::size_t>();
    }
    if (obj.contains("seed")) {
        cfg.seed = obj["seed"].get<std::uint64_t>();
    }
    if (obj.contains("scorer")) {
        cfg.scorer = scorer_config_from_json(obj["scorer"], cfg.scorer);
    }
    if (obj.contains("scorer_round2")) {
        cfg.scorer_round2 = scorer_config_from_json(obj["scorer_round2"], cfg.scorer);
    }
    if (obj.contains("round2_warm_start")) {
        cfg.round2_warm_start = obj["round2_warm_start"].get<bool>();
    }
    if (obj.contains("pseudotag")) {
        const json& pt = obj["pseudotag"];
        if (pt.contains("stop_margin") && pt["stop_margin"].is_number()) {
            cfg.stop_margin = pt["stop_margin"].get<double>();
        }
        if (pt.contains("max_flips_per_tag") && pt["max_flips_per_tag"].is_number()) {
            cfg.max_flips_per_tag = pt["max_flips_per_tag"].get<std::size_t>();
        }
    }
    if (obj.contains("profile")) {
        const json& p = obj["profile"];
        if (p.contains("k")) {
            cfg.profile.k = p["k"].get<std::size_t>();
        }
        if (p.contains("pad_value")) {
            cfg.profile.pad_value = p["pad_value"].get<double>();
        }
        if (p.contains("svm")) {
            const json& s = p["svm"];
            if (s.contains("lambda")) {
                cfg.profile.svm.lambda = s["lambda"].get<double>();
            }
            if (s.contains("epochs")) {
                cfg.profile.svm.epochs = s["epochs"].get<std::size_t>();
            }
            if (s.contains("step_offset")) {
                cfg.profile.svm.step_offset = s["step_offset"].get<double>();
            }
            if (s.contains("rng_seed")) {
                cfg.profile.svm.rng_seed = s["rng_seed"].get<std::uint64_t>();
            }
            if (s.contains("positive_class_weight") &&
                s["positive_class_weight"].is_number()) {
                cfg.profile.svm.positive_class_weight =
                    s["positive_class_weight"].get<double>();
            }
        }
    }
    if (obj.contains("baseline")) {
        const json& b = obj["baseline"];
        if (b.contains("k_prime")) {
            cfg.baseline.k_prime = b["k_prime"].get<std::size_t>();
        }
        if (b.contains("vote_fraction")) {
            cfg.baseline.vote_fraction = b["vote_fraction"].get<double>();
        }
    }
    if (obj.contains("sweep")) {
        const json& s = obj["sweep"];
        if (s.contains("k")) {
            cfg.sweep.k = s["k"].get<std::vector<std::size_t>>();
        }
        if (s.contains("k_prime")) {
            cfg.sweep.k_prime = s["k_prime"].get<std::vector<std::size_t>>();
        }
        if (s.contains("min_instances")) {
            cfg.sweep.min_instances = s["min_instances"].get<std::vector<std::size_t>>();
        }
    }
    return cfg;
}

} // namespace miml
