#include "sfv/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

extern char** environ;

namespace sfv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("key '{}': '{}' is not a number", key, text));
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("key '{}': '{}' is not a non-negative integer", key, text));
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("key '{}': '{}' is not a boolean", key, text));
}

std::string join(const std::vector<std::size_t>& values) { return fmt::format("{}", fmt::join(values, ",")); }

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "study",          "preset",           "dimension",       "horizon",
      "noise_amplitude", "reaction_rate",   "mesh_levels",     "mesh_jitter",     "time_steps",
      "reference_steps", "reference_cells", "closed_form_reference", "time_step_factor",
      "max_separation", "paths",            "seed",            "workers",
      "interpolant",    "mutation",         "newton_tolerance", "max_newton_iterations",
      "out_dir"};
  return keys;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<std::size_t>(parse_unsigned(key, item)));
  }
  if (out.empty()) throw ConfigError(fmt::format("key '{}': empty list", key));
  return out;
}

std::pair<int, std::size_t> parse_mesh_spec(const std::string& text) {
  std::vector<std::size_t> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, 'x')) counts.push_back(static_cast<std::size_t>(parse_unsigned("mesh", trim(item))));
  if (counts.size() != 2 && counts.size() != 3) throw ConfigError(fmt::format("mesh '{}' is not NxM or NxMxP", text));
  if (std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end()) {
    throw ConfigError(fmt::format("mesh '{}': only uniform meshes (equal counts) are supported", text));
  }
  return {static_cast<int>(counts.size()), counts.front()};
}

void set_config_key(StudyConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "study") {
    c.study = study_kind_from_string(value);
  } else if (key == "preset") {
    c.preset = value;
  } else if (key == "dimension") {
    c.dimension = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "horizon") {
    c.horizon = parse_double(key, value);
  } else if (key == "noise_amplitude") {
    c.noise_amplitude = parse_double(key, value);
  } else if (key == "reaction_rate") {
    c.reaction_rate = parse_double(key, value);
  } else if (key == "mesh_levels") {
    c.mesh_levels = parse_size_list(key, value);
  } else if (key == "mesh_jitter") {
    c.mesh_jitter = parse_double(key, value);
  } else if (key == "time_steps") {
    c.time_steps = parse_size_list(key, value);
  } else if (key == "reference_steps") {
    c.reference_steps = parse_unsigned(key, value);
  } else if (key == "reference_cells") {
    c.reference_cells = parse_unsigned(key, value);
  } else if (key == "closed_form_reference") {
    c.closed_form_reference = parse_bool(key, value);
  } else if (key == "time_step_factor") {
    c.time_step_factor = parse_double(key, value);
  } else if (key == "max_separation") {
    c.max_separation = parse_unsigned(key, value);
  } else if (key == "paths") {
    c.paths = parse_unsigned(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "workers") {
    c.workers = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "interpolant") {
    if (value == "right") {
      c.interpolant = Interpolant::right;
    } else if (value == "left") {
      c.interpolant = Interpolant::left;
    } else {
      throw ConfigError(fmt::format("key 'interpolant': '{}' is neither right nor left", value));
    }
  } else if (key == "mutation") {
    c.mutation = mutation_from_string(value);
  } else if (key == "newton_tolerance") {
    c.stepper.newton_tolerance = parse_double(key, value);
  } else if (key == "max_newton_iterations") {
    c.stepper.max_newton_iterations = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

StudyConfig parse_config_text(const std::string& text, const StudyConfig& base) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) eq = line.find(':');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key=value", number));
    pairs.emplace_back(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  StudyConfig config = base;
  for (const auto& [key, value] : pairs) {
    if (key == "study") config = default_config(study_kind_from_string(trim(value)));
  }
  for (const auto& [key, value] : pairs) set_config_key(config, key, value);
  return config;
}

StudyConfig load_config_file(const std::string& path, const StudyConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), base);
}

StudyConfig apply_env_overrides(const StudyConfig& config, const std::map<std::string, std::string>& env) {
  StudyConfig out = config;
  for (const auto& key : known_keys()) {
    std::string name = "SFV_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (const auto it = env.find(name); it != env.end()) set_config_key(out, key, it->second);
  }
  return out;
}

std::map<std::string, std::string> process_env() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string entry(*e);
    if (entry.rfind("SFV_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq != std::string::npos) out.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> config_echo(const StudyConfig& c) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"study", to_string(c.study)},
      {"preset", c.preset},
      {"dimension", std::to_string(c.dimension)},
      {"horizon", fmt::format("{}", c.horizon)},
      {"noise_amplitude", fmt::format("{}", c.noise_amplitude)},
      {"reaction_rate", fmt::format("{}", c.reaction_rate)},
  };
  if (!c.mesh_levels.empty()) out.emplace_back("mesh_levels", join(c.mesh_levels));
  out.emplace_back("mesh_jitter", fmt::format("{}", c.mesh_jitter));
  if (!c.time_steps.empty()) out.emplace_back("time_steps", join(c.time_steps));
  out.emplace_back("reference_steps", std::to_string(c.reference_steps));
  out.emplace_back("reference_cells", std::to_string(c.reference_cells));
  out.emplace_back("closed_form_reference", c.closed_form_reference ? "true" : "false");
  out.emplace_back("time_step_factor", fmt::format("{}", c.time_step_factor));
  out.emplace_back("max_separation", std::to_string(c.max_separation));
  out.emplace_back("paths", std::to_string(c.paths));
  out.emplace_back("seed", std::to_string(c.seed));
  out.emplace_back("workers", std::to_string(c.workers));
  out.emplace_back("interpolant", c.interpolant == Interpolant::right ? "right" : "left");
  out.emplace_back("mutation", to_string(c.mutation));
  out.emplace_back("newton_tolerance", fmt::format("{}", c.stepper.newton_tolerance));
  out.emplace_back("max_newton_iterations", std::to_string(c.stepper.max_newton_iterations));
  if (!c.out_dir.empty()) out.emplace_back("out_dir", c.out_dir);
  return out;
}

std::string config_to_text(const StudyConfig& config) {
  std::string text;
  for (const auto& [k, v] : config_echo(config)) text += fmt::format("{} = {}\n", k, v);
  return text;
}

}  // namespace sfv
