#include "miml/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace miml {

void SynthConfig::validate() const {
    if (num_bags < 1 || num_tags < 1 || feature_dim < 1) {
        throw ValidationError("synth config needs at least one bag, tag and feature");
    }
    if (min_instances < 1 || max_instances < min_instances) {
        throw ValidationError("instance range must satisfy 1 <= min <= max");
    }
    if (!(informative_fraction > 0.0) || informative_fraction > 1.0) {
        throw ValidationError("informative_fraction must lie in (0, 1]");
    }
    if (min_informative < 1) {
        throw ValidationError("min_informative must be at least 1");
    }
    if (min_informative > min_instances) {
        throw ValidationError("infeasible config: min_informative exceeds min_instances");
    }
    if (!(prototype_separation > 0.0)) {
        throw ValidationError("prototype_separation must be positive");
    }
    if (!(feature_noise > 0.0)) {
        throw ValidationError("feature_noise must be positive");
    }
    if (!(tag_prior > 0.0) || !(tag_prior < 1.0)) {
        throw ValidationError("tag_prior must lie in (0, 1)");
    }
}

std::pair<Dataset, SynthTruth> generate(const SynthConfig& config) {
    config.validate();

    std::mt19937_64 rng(config.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> bag_size(config.min_instances,
                                                        config.max_instances);

    // Unit prototype direction per tag.
    std::vector<std::vector<double>> prototypes(config.num_tags);
    for (auto& proto : prototypes) {
        proto.resize(config.feature_dim);
        double norm = 0.0;
        for (double& v : proto) {
            v = normal(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            proto[0] = 1.0;
            norm = 1.0;
        }
        for (double& v : proto) {
            v /= norm;
        }
    }

    std::vector<std::string> tag_names;
    tag_names.reserve(config.num_tags);
    for (std::size_t t = 0; t < config.num_tags; ++t) {
        tag_names.push_back("tag_" + std::to_string(t));
    }

    Dataset dataset;
    dataset.vocabulary = TagVocabulary(tag_names);
    dataset.feature_dim = config.feature_dim;
    SynthTruth truth;

    for (std::size_t n = 0; n < config.num_bags; ++n) {
        const std::size_t count = bag_size(rng);

        std::vector<bool> wants_tag(config.num_tags);
        for (std::size_t t = 0; t < config.num_tags; ++t) {
            wants_tag[t] = uniform01(rng) < config.tag_prior;
        }

        // informative_for[m] == t plants instance m on prototype t; == num_tags
        // leaves it in the background. Slots are handed out in tag order until
        // the bag runs out, so heavily multi-positive bags may end up with
        // fewer informative instances than requested for later tags.
        std::vector<std::size_t> informative_for(count, config.num_tags);
        std::size_t next_slot = 0;
        for (std::size_t t = 0; t < config.num_tags; ++t) {
            if (!wants_tag[t]) {
                continue;
            }
            const double requested = config.informative_fraction * static_cast<double>(count);
            std::size_t want = static_cast<std::size_t>(std::llround(requested));
            want = std::max(want, config.min_informative);
            want = std::min(want, count);
            for (std::size_t i = 0; i < want && next_slot < count; ++i) {
                informative_for[next_slot++] = t;
            }
        }

        Bag bag;
        bag.id = "bag" + std::to_string(n);
        std::vector<LabelVector> bag_flags;
        std::vector<std::size_t> informative_count(config.num_tags, 0);
        for (std::size_t m = 0; m < count; ++m) {
            Instance instance;
            instance.id = "x" + std::to_string(m);
            instance.features.resize(config.feature_dim);
            const std::size_t t = informative_for[m];
            for (std::size_t j = 0; j < config.feature_dim; ++j) {
                double v = config.feature_noise * normal(rng);
                if (t < config.num_tags) {
                    v += config.prototype_separation * prototypes[t][j];
                }
                instance.features[j] = v;
            }
            LabelVector flags = LabelVector::zeros(config.num_tags);
            if (t < config.num_tags) {
                flags.set(t, true);
                ++informative_count[t];
            }
            bag_flags.push_back(std::move(flags));
            bag.instances.push_back(std::move(instance));
        }

        // Labels follow the planted rule, not the sampled intent.
        LabelVector labels = LabelVector::zeros(config.num_tags);
        for (std::size_t t = 0; t < config.num_tags; ++t) {
            labels.set(t, informative_count[t] >= config.min_informative);
        }
        bag.labels = std::move(labels);
        dataset.bags.push_back(std::move(bag));
        truth.flags.push_back(std::move(bag_flags));
    }

    dataset.validate();
    return {std::move(dataset), std::move(truth)};
}

void save_truth(const SynthTruth& truth, const Dataset& dataset, const std::string& path) {
    if (truth.flags.size() != dataset.bags.size()) {
        throw ValidationError("truth does not cover the dataset's bags");
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open file for writing: " + path);
    }
    nlohmann::json header;
    header["format_version"] = 1;
    header["tags"] = dataset.vocabulary.names();
    out << header.dump() << '\n';
    for (std::size_t n = 0; n < dataset.bags.size(); ++n) {
        const Bag& bag = dataset.bags[n];
        if (truth.flags[n].size() != bag.instances.size()) {
            throw ValidationError("truth does not cover bag '" + bag.id + "'");
        }
        nlohmann::json obj;
        obj["id"] = bag.id;
        nlohmann::json instances = nlohmann::json::array();
        for (std::size_t m = 0; m < bag.instances.size(); ++m) {
            nlohmann::json inst;
            inst["id"] = bag.instances[m].id;
            inst["informative"] = truth.flags[n][m].bits();
            instances.push_back(std::move(inst));
        }
        obj["instances"] = std::move(instances);
        out << obj.dump() << '\n';
    }
    if (!out) {
        throw Error("I/O error while writing: " + path);
    }
}

} // namespace miml
