#pragma once

// Field and sample-set containers.
//
// JSON field layout:
//   {"format": "tvc-field", "version": 1, "dim": d, "shape": [...],
//    "M": <number or null>, "values": [row-major doubles]}
// CSV is available for 1-D (one line) and 2-D (one line per axis-1 index).

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tvc/grid.hpp"

namespace tvc {

using Json = nlohmann::json;

Json to_json(const ScalarField& field);
ScalarField field_from_json(const Json& j);

Json to_json(const SampleSet& samples);
SampleSet samples_from_json(const Json& j);

void save_json(const std::filesystem::path& path, const Json& j);
Json load_json(const std::filesystem::path& path);

void save_field_csv(const std::filesystem::path& path, const ScalarField& field);
ScalarField load_field_csv(const std::filesystem::path& path);

/// Dispatches on extension: .csv or JSON otherwise.
ScalarField load_field(const std::filesystem::path& path);
void save_field(const std::filesystem::path& path, const ScalarField& field);

} // namespace tvc
