#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mccdma/hpa.hpp"
#include "mccdma/scenario.hpp"

namespace mccdma {

// Flat key=value text, one key per line, '#' starts a comment.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

ConfigMap parse_config_text(std::string_view text);
// Throws IoError when the file cannot be read, ConfigError on malformed lines.
ConfigMap load_config(const std::filesystem::path& path);

// Applies every key to the scenario; unknown keys and bad values raise ConfigError.
void apply_config(Scenario& scenario, const ConfigMap& config);
void apply_saleh_config(SalehParams& params, const ConfigMap& config);

// key=value lines that apply_config maps back onto the same scenario.
std::string describe(const Scenario& scenario);

}  // namespace mccdma
