// config.hpp
// Run configuration: `key = value` lines, `#` comments, dotted keys.
//
//   scenario = eq5            # eq5 eq7 eq9 eq10 eq11 boson spinstar custom-kernel
//   g = 1.0
//   grid.dt = 0.001
//   grid.t_max = 3
//
// Every key is checked against a fixed schema: unknown keys, keys that do
// not apply to the chosen scenario, malformed values, out-of-range values
// and missing required keys are all reported together.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corrdeph/freqkernel.hpp"

namespace corrdeph::cli {

enum class ScenarioKind { eq5, eq7, eq9, eq10, eq11, boson, spinstar, custom_kernel };

std::string_view scenario_name(ScenarioKind k);
ScenarioKind parse_scenario(std::string_view name);
bool is_frequency_preset(ScenarioKind k);

// Reals (integers included), words, or comma-separated real lists.
using ParamValue = std::variant<double, std::string, std::vector<double>>;

struct GridSpec {
  double t0 = 0.0;
  double dt = 1e-3;
  double t_max = 3.0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
  ScenarioKind scenario = ScenarioKind::eq5;
  bool has_scenario = false;
  // Scenario parameters by full dotted key, defaults filled in.
  std::map<std::string, ParamValue> params;
  GridSpec grid;
  freq::TransformMode mode = freq::TransformMode::cosine_transform;
  std::string output_dir = ".";
  std::string output_stem;  // empty: scenario name
  std::string input_csv;    // only for `measure`

  double real(const std::string& key) const;
  const std::string& word(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;
  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::string stem() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

// Throws ConfigError listing every problem found.
RunConfig parse_config(std::string_view text);

// Canonical text; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& cfg);

// Formats a real with 17 significant digits (round-trip exact).
std::string format_real(double x);

}  // namespace corrdeph::cli
