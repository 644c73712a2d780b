#include "miml/dataset_io.hpp"

#include <fstream>

#include <json.hpp>

namespace miml {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, std::size_t line_number) {
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed JSON");
    }
    if (!parsed.is_object()) {
        throw ParseError("line " + std::to_string(line_number) + ": expected a JSON object");
    }
    return parsed;
}

std::vector<std::uint8_t> read_bits(const json& array, const std::string& context) {
    if (!array.is_array()) {
        throw ParseError(context + ": labels must be an array");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(array.size());
    for (const auto& value : array) {
        if (!value.is_number_integer() ||
            (value.get<int>() != 0 && value.get<int>() != 1)) {
            throw ParseError(context + ": labels must contain only 0 or 1");
        }
        bits.push_back(static_cast<std::uint8_t>(value.get<int>()));
    }
    return bits;
}

} // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open dataset file: " + path);
    }

    std::string line;
    std::size_t line_number = 0;

    if (!std::getline(in, line)) {
        throw ParseError("dataset file is empty: " + path);
    }
    ++line_number;
    json header = parse_line(line, line_number);
    if (!header.contains("format_version") || header["format_version"].get<int>() != 1) {
        throw ParseError("line 1: unsupported or missing format_version");
    }
    if (!header.contains("tags") || !header["tags"].is_array()) {
        throw ParseError("line 1: header must carry a tags array");
    }
    if (!header.contains("feature_dim") || !header["feature_dim"].is_number_unsigned()) {
        throw ParseError("line 1: header must carry a non-negative feature_dim");
    }

    Dataset dataset;
    dataset.vocabulary = TagVocabulary(header["tags"].get<std::vector<std::string>>());
    dataset.feature_dim = header["feature_dim"].get<std::size_t>();

    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        json obj = parse_line(line, line_number);
        const std::string context = "line " + std::to_string(line_number);
        if (!obj.contains("id") || !obj["id"].is_string()) {
            throw ParseError(context + ": bag object needs a string id");
        }
        Bag bag;
        bag.id = obj["id"].get<std::string>();
        if (!obj.contains("labels")) {
            throw ParseError(context + ": bag '" + bag.id + "' has no labels");
        }
        bag.labels = LabelVector(read_bits(obj["labels"], context + ", bag '" + bag.id + "'"));
        if (!obj.contains("instances") || !obj["instances"].is_array()) {
            throw ParseError(context + ": bag '" + bag.id + "' needs an instances array");
        }
        for (const auto& inst : obj["instances"]) {
            if (!inst.is_object() || !inst.contains("id") || !inst.contains("features") ||
                !inst["features"].is_array()) {
                throw ParseError(context + ": bag '" + bag.id + "' has a malformed instance");
            }
            Instance instance;
            instance.id = inst["id"].get<std::string>();
            instance.features = inst["features"].get<std::vector<double>>();
            bag.instances.push_back(std::move(instance));
        }
        dataset.bags.push_back(std::move(bag));
    }

    dataset.validate();
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    dataset.validate();

    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open file for writing: " + path);
    }

    json header;
    header["format_version"] = 1;
    header["tags"] = dataset.vocabulary.names();
    header["feature_dim"] = dataset.feature_dim;
    out << header.dump() << '\n';

    for (const auto& bag : dataset.bags) {
        json obj;
        obj["id"] = bag.id;
        obj["labels"] = bag.labels.bits();
        json instances = json::array();
        for (const auto& instance : bag.instances) {
            json inst;
            inst["id"] = instance.id;
            inst["features"] = instance.features;
            instances.push_back(std::move(inst));
        }
        obj["instances"] = std::move(instances);
        out << obj.dump() << '\n';
    }
    if (!out) {
        throw Error("I/O error while writing: " + path);
    }
}

Dataset filter_by_min_instances(const Dataset& dataset, std::size_t min_count) {
    if (min_count < 1) {
        throw ValidationError("min_count must be at least 1");
    }
    Dataset filtered;
    filtered.vocabulary = dataset.vocabulary;
    filtered.feature_dim = dataset.feature_dim;
    for (const auto& bag : dataset.bags) {
        if (bag.instances.size() >= min_count) {
            filtered.bags.push_back(bag);
        }
    }
    if (filtered.bags.empty()) {
        throw ValidationError("no bag has at least " + std::to_string(min_count) + " instances");
    }
    return filtered;
}

} // namespace miml
