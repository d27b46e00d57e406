#include "corrdeph/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "corrdeph/spinstar.hpp"

namespace corrdeph::cli {

namespace {

using SK = ScenarioKind;

enum class Kind {
  real,
  integer,
  word,
  list,         // comma-separated reals
  breakpoints,  // comma-separated time:value pairs, flattened
};

using Check = std::function<std::optional<std::string>(const ParamValue&)>;

struct KeySpec {
  std::string key;
  Kind kind;
  std::vector<SK> scenarios;
  std::optional<ParamValue> fallback;
  bool required = false;
  Check check;
  std::vector<std::string> words;
  std::size_t list_size = 0;  // 0: any length
};

Check at_least(double lo, bool strict = false) {
  return [lo, strict](const ParamValue& v) -> std::optional<std::string> {
    const double x = std::get<double>(v);
    if (strict ? !(x > lo) : !(x >= lo)) {
      return std::string("must be ") + (strict ? "> " : ">= ") + format_real(lo);
    }
    return std::nullopt;
  };
}

Check within(double lo, double hi) {
  return [lo, hi](const ParamValue& v) -> std::optional<std::string> {
    const double x = std::get<double>(v);
    if (!(x >= lo && x <= hi)) {
      return "must lie in [" + format_real(lo) + ", " + format_real(hi) + "]";
    }
    return std::nullopt;
  };
}

Check clock_check() {
  return [](const ParamValue& v) -> std::optional<std::string> {
    const auto& c = std::get<std::vector<double>>(v);
    if (!(c[0] >= 0.0) || !(c[1] >= 0.0) || !(c[2] >= c[1]) || std::isinf(c[0]) ||
        std::isinf(c[1])) {
      return "clock needs offset >= 0, 0 <= on <= off (off may be inf)";
    }
    return std::nullopt;
  };
}

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = [] {
    const std::vector<SK> coupled = {SK::eq5, SK::eq7, SK::eq9};
    const std::vector<SK> custom = {SK::custom_kernel};
    const std::vector<SK> boson = {SK::boson};
    const std::vector<SK> spin = {SK::spinstar};
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<KeySpec> k;
    k.push_back({"g", Kind::real, coupled, 1.0, false, nullptr, {}, 0});

    k.push_back({"w0", Kind::real, custom, 0.0, false, at_least(0.0), {}, 0});
    for (const char* f : {"k1", "k2", "k12", "l12"}) {
      k.push_back({std::string("kernel.") + f, Kind::list, custom, std::nullopt, false, nullptr,
                   {}, 4});
      k.push_back({std::string("kernel.") + f + ".const", Kind::real, custom, std::nullopt,
                   false, within(0.0, 1.0), {}, 0});
    }
    k.push_back({"schedule.c1", Kind::real, custom, std::nullopt, false, nullptr, {}, 0});
    k.push_back({"schedule.c2", Kind::real, custom, std::nullopt, false, nullptr, {}, 0});
    k.push_back({"schedule.g1", Kind::breakpoints, custom, std::nullopt, false, nullptr, {}, 0});
    k.push_back({"schedule.g2", Kind::breakpoints, custom, std::nullopt, false, nullptr, {}, 0});

    k.push_back({"boson.A1", Kind::real, boson, std::nullopt, true, at_least(0.0), {}, 0});
    k.push_back({"boson.A2", Kind::real, boson, 1.0, false, at_least(0.0), {}, 0});
    k.push_back({"boson.Omega1", Kind::real, boson, 1.0, false, at_least(0.0, true), {}, 0});
    k.push_back({"boson.Omega2", Kind::real, boson, 1.0, false, at_least(0.0, true), {}, 0});
    k.push_back({"boson.beta", Kind::real, boson, std::nullopt, true, at_least(0.0, true), {}, 0});
    for (const char* c : {"boson.clock1.system", "boson.clock2.system"}) {
      k.push_back({c, Kind::list, boson, std::vector<double>{0.0, 0.0, inf}, false, clock_check(),
                   {}, 3});
    }
    for (const char* c : {"boson.clock1.ancilla", "boson.clock2.ancilla"}) {
      k.push_back({c, Kind::list, boson, std::vector<double>{0.0, 0.0, 0.0}, false, clock_check(),
                   {}, 3});
    }
    k.push_back({"boson.override.gamma2", Kind::real, boson, std::nullopt, false, at_least(0.0),
                 {}, 0});
    k.push_back({"boson.override.xi2", Kind::real, boson, std::nullopt, false, nullptr, {}, 0});

    k.push_back({"spinstar.n1", Kind::integer, spin, std::nullopt, true, at_least(1.0), {}, 0});
    k.push_back({"spinstar.n2", Kind::integer, spin, std::nullopt, true, at_least(1.0), {}, 0});
    for (const char* p : {"spinstar.B1", "spinstar.B2", "spinstar.alpha", "spinstar.J1",
                          "spinstar.J2"}) {
      k.push_back({p, Kind::real, spin, 0.0, false, nullptr, {}, 0});
    }
    k.push_back({"spinstar.beta", Kind::real, spin, std::nullopt, true, at_least(0.0), {}, 0});
    k.push_back({"spinstar.g1", Kind::list, spin, std::nullopt, false, nullptr, {}, 0});
    k.push_back({"spinstar.g2", Kind::list, spin, std::nullopt, false, nullptr, {}, 0});
    k.push_back({"spinstar.theta2", Kind::real, spin, 0.0, false, at_least(0.0), {}, 0});
    k.push_back({"spinstar.pair_rule", Kind::word, spin, std::string("complete"), false, nullptr,
                 {"complete", "ring"}, 0});
    k.push_back({"spinstar.enumeration", Kind::word, spin, std::string("automatic"), false,
                 nullptr, {"automatic", "full", "symmetric"}, 0});
    return k;
  }();
  return keys;
}

const KeySpec* find_spec(const std::string& key) {
  for (const auto& s : schema()) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> to_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, x);
  if (ec != std::errc() || ptr != end || std::isnan(x)) return std::nullopt;
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<ParamValue> convert(const KeySpec& spec, const std::string& raw,
                                  std::string& problem) {
  switch (spec.kind) {
    case Kind::real: {
      auto x = to_real(raw);
      if (!x) {
        problem = "expected a real number, got '" + raw + "'";
        return std::nullopt;
      }
      return *x;
    }
    case Kind::integer: {
      auto x = to_real(raw);
      if (!x || std::floor(*x) != *x || std::isinf(*x)) {
        problem = "expected an integer, got '" + raw + "'";
        return std::nullopt;
      }
      return *x;
    }
    case Kind::word: {
      if (std::find(spec.words.begin(), spec.words.end(), raw) == spec.words.end()) {
        std::string options;
        for (const auto& w : spec.words) options += (options.empty() ? "" : "|") + w;
        problem = "expected one of " + options + ", got '" + raw + "'";
        return std::nullopt;
      }
      return raw;
    }
    case Kind::list: {
      std::vector<double> xs;
      for (const auto& part : split(raw, ',')) {
        auto x = to_real(part);
        if (!x) {
          problem = "expected a comma-separated list of reals, got '" + raw + "'";
          return std::nullopt;
        }
        xs.push_back(*x);
      }
      if (spec.list_size != 0 && xs.size() != spec.list_size) {
        problem = "expected " + std::to_string(spec.list_size) + " values, got " +
                  std::to_string(xs.size());
        return std::nullopt;
      }
      return xs;
    }
    case Kind::breakpoints: {
      std::vector<double> xs;
      for (const auto& part : split(raw, ',')) {
        const auto tv = split(part, ':');
        std::optional<double> t, g;
        if (tv.size() == 2) {
          t = to_real(tv[0]);
          g = to_real(tv[1]);
        }
        if (!t || !g) {
          problem = "expected time:value pairs, got '" + raw + "'";
          return std::nullopt;
        }
        xs.push_back(*t);
        xs.push_back(*g);
      }
      return xs;
    }
  }
  return std::nullopt;
}

std::string render_value(const KeySpec* spec, const ParamValue& v) {
  if (const auto* x = std::get_if<double>(&v)) return format_real(*x);
  if (const auto* w = std::get_if<std::string>(&v)) return *w;
  const auto& xs = std::get<std::vector<double>>(v);
  std::string out;
  const bool pairs = spec && spec->kind == Kind::breakpoints;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (pairs) {
      if (i % 2 == 1) continue;
      if (!out.empty()) out += ", ";
      out += format_real(xs[i]) + ":" + format_real(xs[i + 1]);
    } else {
      if (!out.empty()) out += ", ";
      out += format_real(xs[i]);
    }
  }
  return out;
}

bool applies(const KeySpec& spec, SK kind) {
  return spec.scenarios.empty() ||
         std::find(spec.scenarios.begin(), spec.scenarios.end(), kind) != spec.scenarios.end();
}

void check_custom_kernel(RunConfig& cfg, std::vector<std::string>& errors) {
  const bool scheduled = cfg.has("schedule.g1") || cfg.has("schedule.g2");
  bool has_kernel = false;
  for (const char* f : {"k1", "k2", "k12", "l12"}) {
    const std::string phase = std::string("kernel.") + f;
    if (cfg.has(phase) || cfg.has(phase + ".const")) has_kernel = true;
  }
  if (scheduled) {
    if (has_kernel) errors.push_back("custom-kernel: use either kernel.* or schedule.*, not both");
    for (const char* g : {"schedule.g1", "schedule.g2"}) {
      if (!cfg.has(g)) errors.push_back(std::string("missing required key '") + g + "'");
    }
    if (!cfg.has("schedule.c1")) cfg.params["schedule.c1"] = 0.0;
    if (!cfg.has("schedule.c2")) cfg.params["schedule.c2"] = 0.0;
    for (const char* g : {"schedule.g1", "schedule.g2"}) {
      if (!cfg.has(g)) continue;
      const auto& bp = cfg.list(g);
      std::vector<freq::CouplingSchedule::Breakpoint> pts;
      for (std::size_t i = 0; i + 1 < bp.size(); i += 2) pts.push_back({bp[i], bp[i + 1]});
      try {
        freq::CouplingSchedule check(pts);
      } catch (const std::exception& e) {
        errors.push_back(std::string(g) + ": " + e.what());
      }
    }
    return;
  }
  if (cfg.has("schedule.c1") || cfg.has("schedule.c2")) {
    errors.push_back("custom-kernel: schedule.c1/c2 need schedule.g1 and schedule.g2");
  }
  bool complete = true;
  for (const char* f : {"k1", "k2", "k12", "l12"}) {
    const std::string phase = std::string("kernel.") + f;
    const bool p = cfg.has(phase), c = cfg.has(phase + ".const");
    if (p && c) errors.push_back("custom-kernel: give either " + phase + " or " + phase +
                                 ".const, not both");
    if (!p && !c) {
      errors.push_back("missing required key '" + phase + "' (or '" + phase + ".const')");
      complete = false;
    }
  }
  if (!complete) return;
  // All four factors must start at 1.
  freq::FrequencyScenario sc;
  sc.w0 = cfg.real("w0");
  sc.mode = cfg.mode;
  const char* names[4] = {"k1", "k2", "k12", "l12"};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string phase = std::string("kernel.") + names[i];
    if (cfg.has(phase)) {
      const auto& v = cfg.list(phase);
      sc.kernels[i] = {v[0], v[1], v[2], v[3]};
    } else {
      sc.constant_overrides[i] = cfg.real(phase + ".const");
    }
  }
  try {
    if (freq::initial_coherence_error(sc) > 1e-9) {
      errors.push_back("custom-kernel: every factor must equal 1 at t = 0");
    }
  } catch (const std::exception& e) {
    errors.push_back(std::string("custom-kernel: ") + e.what());
  }
}

void check_boson(const RunConfig& cfg, std::vector<std::string>& errors) {
  if (cfg.has("boson.override.gamma2") != cfg.has("boson.override.xi2")) {
    errors.push_back("boson.override.gamma2 and boson.override.xi2 must be given together");
  }
}

void check_spinstar(const RunConfig& cfg, std::vector<std::string>& errors) {
  if (!cfg.has("spinstar.n1") || !cfg.has("spinstar.n2") || !cfg.has("spinstar.beta")) return;
  spin::SpinStarConfig s;
  s.n1 = static_cast<int>(cfg.real("spinstar.n1"));
  s.n2 = static_cast<int>(cfg.real("spinstar.n2"));
  s.B1 = cfg.real("spinstar.B1");
  s.B2 = cfg.real("spinstar.B2");
  s.alpha = cfg.real("spinstar.alpha");
  s.J1 = cfg.real("spinstar.J1");
  s.J2 = cfg.real("spinstar.J2");
  s.beta = cfg.real("spinstar.beta");
  if (cfg.has("spinstar.g1")) s.g1 = cfg.list("spinstar.g1");
  if (cfg.has("spinstar.g2")) s.g2 = cfg.list("spinstar.g2");
  s.pair_rule = spin::parse_pair_rule(cfg.word("spinstar.pair_rule"));
  try {
    s.validate();
  } catch (const std::exception& e) {
    errors.push_back(std::string("spinstar: ") + e.what());
  }
  if (cfg.word("spinstar.enumeration") == "symmetric" &&
      !(s.pair_rule == spin::PairRule::complete && s.uniform_couplings())) {
    errors.push_back(
        "spinstar: symmetric enumeration needs pair_rule = complete and uniform couplings");
  }
}

}  // namespace

std::string_view scenario_name(ScenarioKind k) {
  switch (k) {
    case SK::eq5: return "eq5";
    case SK::eq7: return "eq7";
    case SK::eq9: return "eq9";
    case SK::eq10: return "eq10";
    case SK::eq11: return "eq11";
    case SK::boson: return "boson";
    case SK::spinstar: return "spinstar";
    case SK::custom_kernel: return "custom-kernel";
  }
  return "?";
}

ScenarioKind parse_scenario(std::string_view name) {
  for (SK k : {SK::eq5, SK::eq7, SK::eq9, SK::eq10, SK::eq11, SK::boson, SK::spinstar,
               SK::custom_kernel}) {
    if (scenario_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

bool is_frequency_preset(ScenarioKind k) {
  return k == SK::eq5 || k == SK::eq7 || k == SK::eq9 || k == SK::eq10 || k == SK::eq11;
}

double RunConfig::real(const std::string& key) const { return std::get<double>(params.at(key)); }

const std::string& RunConfig::word(const std::string& key) const {
  return std::get<std::string>(params.at(key));
}

const std::vector<double>& RunConfig::list(const std::string& key) const {
  return std::get<std::vector<double>>(params.at(key));
}

std::string RunConfig::stem() const {
  if (!output_stem.empty()) return output_stem;
  return std::string(scenario_name(scenario));
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      continue;
    }
    entries.emplace_back(key, value);
  }

  RunConfig cfg;
  std::optional<double> t0, dt, t_max;
  for (const auto& [key, value] : entries) {
    if (key == "scenario") {
      try {
        cfg.scenario = parse_scenario(value);
        cfg.has_scenario = true;
      } catch (const std::exception& e) {
        errors.push_back(e.what());
      }
    }
  }

  for (const auto& [key, value] : entries) {
    if (key == "scenario") continue;
    if (key == "grid.t0" || key == "grid.dt" || key == "grid.t_max") {
      auto x = to_real(value);
      if (!x) {
        errors.push_back(key + ": expected a real number, got '" + value + "'");
        continue;
      }
      (key == "grid.t0" ? t0 : key == "grid.dt" ? dt : t_max) = *x;
      continue;
    }
    if (key == "mode") {
      try {
        cfg.mode = freq::parse_mode(value);
      } catch (const std::exception& e) {
        errors.push_back(std::string("mode: ") + e.what());
      }
      continue;
    }
    if (key == "output.dir" || key == "output.stem" || key == "input.csv") {
      if (value.empty()) {
        errors.push_back(key + ": empty value");
        continue;
      }
      (key == "output.dir" ? cfg.output_dir : key == "output.stem" ? cfg.output_stem
                                                                    : cfg.input_csv) = value;
      continue;
    }
    const KeySpec* spec = find_spec(key);
    if (!spec) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    std::string problem;
    auto converted = convert(*spec, value, problem);
    if (!converted) {
      errors.push_back(key + ": " + problem);
      continue;
    }
    if (spec->check) {
      if (auto bad = spec->check(*converted)) {
        errors.push_back(key + ": " + *bad);
        continue;
      }
    }
    if (cfg.has_scenario && !applies(*spec, cfg.scenario)) {
      errors.push_back("key '" + key + "' does not apply to scenario " +
                       std::string(scenario_name(cfg.scenario)));
      continue;
    }
    cfg.params[key] = std::move(*converted);
  }

  if (t0) cfg.grid.t0 = *t0;
  if (dt) cfg.grid.dt = *dt;
  if (t_max) cfg.grid.t_max = *t_max;
  if (!(cfg.grid.t0 >= 0.0)) errors.push_back("grid.t0: must be >= 0");
  if (!(cfg.grid.dt > 0.0) || std::isinf(cfg.grid.dt)) errors.push_back("grid.dt: must be > 0");
  if (!(cfg.grid.t_max > cfg.grid.t0) || std::isinf(cfg.grid.t_max)) {
    errors.push_back("grid: t_max must exceed t0 (empty grid)");
  } else if (cfg.grid.dt > 0.0 && (cfg.grid.t_max - cfg.grid.t0) / cfg.grid.dt < 2.0 - 1e-9) {
    errors.push_back("grid: needs at least 3 points");
  }

  if (!cfg.has_scenario) {
    if (cfg.input_csv.empty()) errors.push_back("missing required key 'scenario'");
  } else {
    for (const auto& spec : schema()) {
      if (!applies(spec, cfg.scenario) || cfg.has(spec.key)) continue;
      if (spec.required) {
        errors.push_back("missing required key '" + spec.key + "' for scenario " +
                         std::string(scenario_name(cfg.scenario)));
      } else if (spec.fallback) {
        cfg.params[spec.key] = *spec.fallback;
      }
    }
    if (errors.empty()) {
      switch (cfg.scenario) {
        case SK::custom_kernel: check_custom_kernel(cfg, errors); break;
        case SK::boson: check_boson(cfg, errors); break;
        case SK::spinstar: check_spinstar(cfg, errors); break;
        default: break;
      }
    }
  }
  // Cross-key rules that do not need a scenario.
  if (!cfg.has_scenario) {
    const bool j1 = cfg.has("spinstar.J1") && cfg.real("spinstar.J1") != 0.0;
    const bool b1_zero = cfg.has("spinstar.B1") && cfg.real("spinstar.B1") == 0.0;
    const bool j2 = cfg.has("spinstar.J2") && cfg.real("spinstar.J2") != 0.0;
    const bool b2_zero = cfg.has("spinstar.B2") && cfg.real("spinstar.B2") == 0.0;
    if (j1 && b1_zero) errors.push_back("spinstar: J1 != 0 requires B1 != 0 (J/B)");
    if (j2 && b2_zero) errors.push_back("spinstar: J2 != 0 requires B2 != 0 (J/B)");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  if (cfg.has_scenario) line("scenario", std::string(scenario_name(cfg.scenario)));
  line("grid.t0", format_real(cfg.grid.t0));
  line("grid.dt", format_real(cfg.grid.dt));
  line("grid.t_max", format_real(cfg.grid.t_max));
  line("mode", std::string(freq::mode_name(cfg.mode)));
  line("output.dir", cfg.output_dir);
  if (!cfg.output_stem.empty()) line("output.stem", cfg.output_stem);
  if (!cfg.input_csv.empty()) line("input.csv", cfg.input_csv);
  for (const auto& [key, value] : cfg.params) line(key, render_value(find_spec(key), value));
  return out;
}

}  // namespace corrdeph::cli
