#pragma once

#include <filesystem>
#include <string_view>

#include "tbandit/harness/experiment.hpp"

namespace tbandit::harness {

/// Parses a TOML experiment description with top-level tables
/// [environment], [experiment] and [[agents]]. Setting experiment.preset
/// starts from that preset; [environment] and [[agents]], when present,
/// replace the preset's. Unknown keys and type mismatches raise ConfigError.
ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name = "<config>");
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Comma-separated lists used by the CLI overrides.
std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what);
std::vector<AgentConfig> parse_agent_list(std::string_view text);

}  // namespace tbandit::harness
