#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sfv/study.hpp"

namespace sfv {

/// key=value text, one pair per line, '#' starts a comment. A `study` key
/// selects the defaults the remaining keys override. Unknown keys and
/// malformed values throw ConfigError naming the key.
StudyConfig parse_config_text(const std::string& text, const StudyConfig& base);

/// Reads and parses a config file; a missing file is a ConfigError.
StudyConfig load_config_file(const std::string& path, const StudyConfig& base);

/// Applies SFV_<KEY> variables (e.g. SFV_SEED, SFV_PATHS) from `env`.
/// Variables with the prefix that match no key are ignored.
StudyConfig apply_env_overrides(const StudyConfig& config, const std::map<std::string, std::string>& env);

/// Current process environment restricted to the SFV_ prefix.
std::map<std::string, std::string> process_env();

/// Sets one key; the same keys as the config file.
void set_config_key(StudyConfig& config, const std::string& key, const std::string& value);

/// Every key with its current value, in file order. parse_config_text of the
/// joined lines reproduces `config`.
std::vector<std::pair<std::string, std::string>> config_echo(const StudyConfig& config);
std::string config_to_text(const StudyConfig& config);

/// "8,16,32" -> {8, 16, 32}
std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text);

/// "NxM" or "NxMxP"; all counts must be equal (meshes are uniform).
std::pair<int, std::size_t> parse_mesh_spec(const std::string& text);

}  // namespace sfv
