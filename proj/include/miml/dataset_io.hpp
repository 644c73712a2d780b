#pragma once

#include <string>

#include "miml/types.hpp"

namespace miml {

// JSON Lines bag format. Line 1 is a header object
//   {"format_version":1, "tags":[...], "feature_dim":d}
// and each following line is one bag object
//   {"id":..., "labels":[0/1 x L], "instances":[{"id":..., "features":[d reals]}, ...]}
// load_dataset validates every dataset invariant and reports parse errors with
// their line number.
Dataset load_dataset(const std::string& path);

// Inverse of load_dataset: load(save(x)) == x field for field.
void save_dataset(const Dataset& dataset, const std::string& path);

// Keeps exactly the bags with at least min_count instances, preserving order.
// Throws ValidationError when min_count < 1 or no bag qualifies.
Dataset filter_by_min_instances(const Dataset& dataset, std::size_t min_count);

} // namespace miml
