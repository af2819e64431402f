#include "hsreg/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace hsreg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value, int line) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(fmt::format("config line {}: '{}' is not a number for key '{}'", line, value, key));
  }
  return out;
}

}  // namespace

Branch parse_branch(const std::string& s) {
  if (s == "kdv25") return Branch::kdv25;
  if (s == "toda-merge") return Branch::toda_merge;
  throw ConfigError(fmt::format("unknown branch '{}' (expected kdv25 or toda-merge)", s));
}

std::string to_string(Branch b) { return b == Branch::kdv25 ? "kdv25" : "toda-merge"; }

void ScenarioConfig::validate() const {
  if (!(eps > 0.0 && eps <= 1e-2)) throw ConfigError(fmt::format("eps = {} outside (0, 1e-2]", eps));
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw ConfigError(fmt::format("tol = {} outside [1e-13, 1e-6]", tol));
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string body = trim(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected 'key = value'", line));
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(fmt::format("config line {}: empty key or value", line));
    if (key == "branch") {
      cfg.branch = parse_branch(value);
    } else if (key == "eps") {
      cfg.eps = parse_number(key, value, line);
    } else if (key == "t1") {
      cfg.t1 = parse_number(key, value, line);
    } else if (key == "t3") {
      cfg.t3 = parse_number(key, value, line);
    } else if (key == "x_c") {
      cfg.x_c = parse_number(key, value, line);
    } else if (key == "x_switch") {
      cfg.x_switch = parse_number(key, value, line);
    } else if (key == "xi0") {
      cfg.xi0 = parse_number(key, value, line);
    } else if (key == "tol") {
      cfg.tol = parse_number(key, value, line);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw ConfigError(fmt::format("config line {}: unknown key '{}'", line, key));
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hsreg::cli
