#pragma once

#include <filesystem>
#include "json.hpp"
#include <string>

#include "mdvo/scenario.hpp"

namespace mdvo {

/// JSON form of a scenario. Keys mirror the Scenario record; agents are
/// listed in index order with an optional 1-based "id" that must match.
nlohmann::json scenario_to_json(const Scenario& sc);

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ConfigError with the JSON path of the field.
Scenario scenario_from_json(const nlohmann::json& j);

/// Loads a scenario file. Also accepts a run's metadata sidecar, in which
/// case the resolved scenario recorded there is returned.
Scenario load_scenario_file(const std::filesystem::path& path);

}  // namespace mdvo
