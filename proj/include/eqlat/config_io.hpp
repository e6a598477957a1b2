#pragma once

#include <filesystem>
#include <string>

#include "eqlat/scenario.hpp"

namespace eqlat {

/// Reads a JSON scenario file. Unknown keys, missing required keys and type
/// mismatches are ConfigErrors naming the offending key path; syntax errors
/// report line and column. The result has passed ScenarioConfig::validate().
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& source = "<text>");

/// Inverse of parse_config_text; doubles are written so that they read back
/// bit-identically.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace eqlat
