#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace hsreg::cli {

/// Malformed or out-of-range configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Branch { kdv25, toda_merge };

struct ScenarioConfig {
  Branch branch = Branch::kdv25;
  double eps = 1e-5;
  double t1 = -0.8;
  double t3 = 1.0;   ///< Toda merging example; the finger uses t_3 = 2/7
  double x_c = 1.0;  ///< Toda critical abscissa
  double x_switch = 0.638;
  double xi0 = 30.0;
  double tol = 1e-12;
  std::optional<std::filesystem::path> output_dir;

  /// Throws ConfigError when eps is outside (0, 1e-2] or tol outside [1e-13, 1e-6].
  void validate() const;
};

/// Flat `key = value` lines; `#` starts a comment. Unknown keys and
/// unparsable values throw ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& file);

Branch parse_branch(const std::string& s);
std::string to_string(Branch b);

}  // namespace hsreg::cli
