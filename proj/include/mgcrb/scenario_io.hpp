#pragma once

#include "mgcrb/scenario.hpp"

#include <filesystem>
#include <string>

namespace mgcrb {

/// Parses and validates a YAML scenario; ConfigError messages carry line/column for
/// syntax errors and name the violated invariant otherwise.
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Accepts a path, or the name of a bundled scenario ("scenario1").
std::filesystem::path resolve_scenario_path(const std::string& name_or_path);

/// YAML text that parse_scenario reads back into an equivalent scenario.
std::string to_yaml(const Scenario& scenario);

}  // namespace mgcrb
