#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hetcomp/experiment.hpp"

namespace hetcomp {

/// Parses the JSON experiment description. Throws ConfigError on malformed
/// input or unknown enum values; semantic checks are left to validate().
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, shortest round-trip numbers). Parsing the
/// output yields an equal config.
std::string to_json(const ExperimentConfig& config, int indent = -1);

/// Hex SHA-256 of the canonical JSON.
std::string config_digest(const ExperimentConfig& config);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace hetcomp
