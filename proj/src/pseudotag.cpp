#include "miml/pseudotag.hpp"

#include <algorithm>

#include <json.hpp>

namespace miml {

std::vector<TaggedInstance> initialize_instance_labels(const Dataset& dataset) {
    dataset.validate();
    std::vector<TaggedInstance> tagged;
    tagged.reserve(dataset.total_instances());
    for (const auto& bag : dataset.bags) {
        for (const auto& instance : bag.instances) {
            tagged.push_back(TaggedInstance{instance, bag.labels, bag.id});
        }
    }
    return tagged;
}

std::pair<std::vector<TaggedInstance>, PseudoTagReport>
pseudo_tag(const std::vector<TaggedInstance>& data, const ScoreTable& scores,
           const PseudoTagConfig& config) {
    if (data.empty()) {
        throw ValidationError("pseudo_tag needs a non-empty instance sequence");
    }
    const std::size_t num_tags = data.front().labels.size();

    // Resolve all score lookups up front; a missing entry is a hard error.
    std::vector<const ScoreVector*> score_of(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].labels.size() != num_tags) {
            throw ValidationError("tagged instances disagree on label length");
        }
        score_of[i] = &scores.at(data[i].bag_id, data[i].instance.id);
        if (score_of[i]->size() != num_tags) {
            throw ValidationError("score vector length does not match the label length");
        }
    }

    std::vector<TaggedInstance> result = data;
    PseudoTagReport report;
    report.per_tag.resize(num_tags);

    const std::size_t cap = config.max_flips_per_tag.value_or(data.size());

    for (std::size_t t = 0; t < num_tags; ++t) {
        TagFlipStats& stats = report.per_tag[t];

        // Candidate pools fixed at entry, sorted once. Position in the input
        // sequence breaks score ties, so each instance flips at most once per
        // tag and the candidate scores move monotonically.
        std::vector<std::size_t> add_pool;    // y^t = 0, walked by descending score
        std::vector<std::size_t> remove_pool; // y^t = 1, walked by ascending score
        for (std::size_t i = 0; i < data.size(); ++i) {
            (data[i].labels.test(t) ? remove_pool : add_pool).push_back(i);
        }
        std::stable_sort(add_pool.begin(), add_pool.end(),
                         [&](std::size_t a, std::size_t b) {
                             return (*score_of[a])[t] > (*score_of[b])[t];
                         });
        std::stable_sort(remove_pool.begin(), remove_pool.end(),
                         [&](std::size_t a, std::size_t b) {
                             return (*score_of[a])[t] < (*score_of[b])[t];
                         });

        std::size_t pa = 0;
        std::size_t pc = 0;
        while (pa < add_pool.size() && pc < remove_pool.size()) {
            if (stats.adds >= cap) {
                stats.cap_hit = true;
                break;
            }
            const std::size_t add_idx = add_pool[pa];
            const std::size_t rem_idx = remove_pool[pc];
            const double margin = (*score_of[add_idx])[t] - (*score_of[rem_idx])[t];
            ++stats.iterations;
            stats.final_margin = margin;
            if (!(margin > config.stop_margin)) {
                break; // the failing pair is not flipped
            }
            result[add_idx].labels.set(t, true);
            result[rem_idx].labels.set(t, false);
            ++stats.adds;
            ++stats.removes;
            report.flips.push_back(PseudoTagReport::Flip{t, add_idx, rem_idx});
            ++pa;
            ++pc;
        }
    }

    return {std::move(result), std::move(report)};
}

std::string report_to_json(const PseudoTagReport& report, const TagVocabulary& vocabulary) {
    nlohmann::json obj;
    obj["format_version"] = 1;
    nlohmann::json tags = nlohmann::json::array();
    for (std::size_t t = 0; t < report.per_tag.size(); ++t) {
        const TagFlipStats& stats = report.per_tag[t];
        nlohmann::json entry;
        entry["tag"] = t < vocabulary.size() ? vocabulary.name(t) : std::to_string(t);
        entry["adds"] = stats.adds;
        entry["removes"] = stats.removes;
        entry["iterations"] = stats.iterations;
        if (stats.final_margin) {
            entry["final_margin"] = *stats.final_margin;
        } else {
            entry["final_margin"] = nullptr;
        }
        entry["cap_hit"] = stats.cap_hit;
        tags.push_back(std::move(entry));
    }
    obj["tags"] = std::move(tags);
    obj["total_flips"] = report.total_flips();
    return obj.dump(2);
}

} // namespace miml
