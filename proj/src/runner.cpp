#include "corrdeph/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "corrdeph/bosonbath.hpp"
#include "corrdeph/freqkernel.hpp"
#include "corrdeph/spinstar.hpp"

namespace corrdeph::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::vector<Column> plain_columns(std::initializer_list<Factor> fs) {
  std::vector<Column> out;
  for (Factor f : fs) out.push_back({std::string(factor_name(f)), f, 1.0});
  return out;
}

const std::vector<Factor> kAll(kAllFactors.begin(), kAllFactors.end());

boson::InteractionClock clock_of(const RunConfig& cfg, const std::string& key) {
  const auto& v = cfg.list(key);
  return {v[0], v[1], v[2]};
}

spin::SpinStarConfig spin_config(const RunConfig& cfg) {
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
  return s;
}

spin::Enumeration enumeration_of(const std::string& w) {
  if (w == "full") return spin::Enumeration::full;
  if (w == "symmetric") return spin::Enumeration::symmetric;
  return spin::Enumeration::automatic;
}

freq::CouplingSchedule schedule_of(const std::vector<double>& flat) {
  std::vector<freq::CouplingSchedule::Breakpoint> pts;
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2) pts.push_back({flat[i], flat[i + 1]});
  return freq::CouplingSchedule(std::move(pts));
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
}

std::optional<double> refined_onset(const analysis::BackflowReport& rep, Factor f,
                                    const FactorEvaluator* eval) {
  if (!rep.onset) return std::nullopt;
  const std::size_t b = rep.intervals.front().begin;
  if (!eval || b == 0 || b + 1 >= rep.grid.n) return rep.onset;
  auto modulus = [&](double t) { return std::abs((*eval)(t).get(f)); };
  return analysis::golden_section_minimize(modulus, rep.grid.at(b - 1), rep.grid.at(b + 1),
                                           1e-9);
}

}  // namespace

NumericalError::NumericalError(const std::string& scenario, double t, const std::string& what)
    : std::runtime_error("scenario " + scenario + ": " + what), t_(t) {}

ScenarioPlan plan_scenario(const RunConfig& cfg) {
  if (!cfg.has_scenario) throw ConfigError({"missing required key 'scenario'"});
  ScenarioPlan plan;
  plan.scenario = std::string(scenario_name(cfg.scenario));
  try {
    plan.grid = TimeGrid::span(cfg.grid.t0, cfg.grid.dt, cfg.grid.t_max);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({e.what()});
  }
  plan.columns = plain_columns({Factor::kappa1, Factor::kappa2, Factor::kappa12, Factor::lambda12});
  plan.modeled = kAll;

  switch (cfg.scenario) {
    case ScenarioKind::eq5:
    case ScenarioKind::eq7:
    case ScenarioKind::eq9:
    case ScenarioKind::eq10:
    case ScenarioKind::eq11: {
      const double g = cfg.has("g") ? cfg.real("g") : 1.0;
      freq::FrequencyScenario sc = freq::scenario_preset(plan.scenario, g);
      sc.mode = cfg.mode;
      plan.eval = [sc](double t) { return freq::eval_factors(sc, t); };
      break;
    }
    case ScenarioKind::custom_kernel: {
      if (cfg.has("schedule.g1")) {
        try {
          const freq::ScheduledScenario sc = [&] {
            auto s = freq::derive_kernels(cfg.real("schedule.c1"), cfg.real("schedule.c2"),
                                          schedule_of(cfg.list("schedule.g1")),
                                          schedule_of(cfg.list("schedule.g2")), cfg.real("w0"));
            s.mode = cfg.mode;
            return s;
          }();
          plan.eval = [sc](double t) { return freq::eval_factors(sc, t); };
        } catch (const std::invalid_argument& e) {
          throw ConfigError({e.what()});
        }
      } else {
        freq::FrequencyScenario sc;
        sc.name = "custom-kernel";
        sc.w0 = cfg.real("w0");
        sc.mode = cfg.mode;
        const char* names[4] = {"k1", "k2", "k12", "l12"};
        for (std::size_t i = 0; i < 4; ++i) {
          const std::string key = std::string("kernel.") + names[i];
          if (cfg.has(key)) {
            const auto& v = cfg.list(key);
            sc.kernels[i] = {v[0], v[1], v[2], v[3]};
          } else {
            sc.constant_overrides[i] = cfg.real(key + ".const");
          }
        }
        plan.eval = [sc](double t) { return freq::eval_factors(sc, t); };
      }
      break;
    }
    case ScenarioKind::boson: {
      boson::OhmicBathConfig bath;
      bath.A1 = cfg.real("boson.A1");
      bath.A2 = cfg.real("boson.A2");
      bath.Omega1 = cfg.real("boson.Omega1");
      bath.Omega2 = cfg.real("boson.Omega2");
      bath.beta = cfg.real("boson.beta");
      try {
        bath.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError({e.what()});
      }
      const boson::ClockPair c1{clock_of(cfg, "boson.clock1.system"),
                                clock_of(cfg, "boson.clock1.ancilla")};
      const boson::ClockPair c2{clock_of(cfg, "boson.clock2.system"),
                                clock_of(cfg, "boson.clock2.ancilla")};
      std::optional<boson::Fig6Overrides> over;
      if (cfg.has("boson.override.gamma2")) {
        over = boson::Fig6Overrides{cfg.real("boson.override.gamma2"),
                                    cfg.real("boson.override.xi2")};
      }
      plan.eval = [bath, c1, c2, over](double t) {
        const auto f = boson::eval_boson_factors(bath, c1, c2, over, t);
        DephasingFactors d;
        d.k1 = f.kappa1;
        d.l12 = f.lambda12;
        return d;
      };
      plan.columns = plain_columns({Factor::kappa1, Factor::lambda12});
      plan.modeled = {Factor::kappa1, Factor::lambda12};
      break;
    }
    case ScenarioKind::spinstar: {
      const spin::SpinStarConfig s = spin_config(cfg);
      spin::PhaseTable table;
      try {
        table = spin::build_phase_table(s, enumeration_of(cfg.word("spinstar.enumeration")));
      } catch (const std::invalid_argument& e) {
        throw ConfigError({std::string("spinstar: ") + e.what()});
      }
      const double theta2 = cfg.real("spinstar.theta2");
      plan.eval = [table = std::move(table), theta2](double t) {
        return spin::eval_spinstar_factors(table, {t, theta2});
      };
      break;
    }
  }
  return plan;
}

FactorTrace evaluate(const ScenarioPlan& plan) {
  try {
    return sample(plan.eval, plan.grid);
  } catch (const EvaluationError& e) {
    throw NumericalError(plan.scenario, e.time(), e.what());
  }
}

std::string format_csv(const FactorTrace& trace, const std::vector<Column>& columns) {
  std::string out = "t";
  for (const auto& c : columns) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    out += fmt("%.9g", trace.grid.at(i));
    for (const auto& c : columns) {
      out += ",";
      out += fmt("%.9g", c.scale * std::abs(trace.samples[i].get(c.factor)));
    }
    out += "\n";
  }
  return out;
}

CsvSeries parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    return cells;
  };
  const auto header = split(line);
  if (header.empty() || header[0] != "t") throw std::runtime_error("csv: first column must be t");

  std::vector<std::pair<std::size_t, Factor>> picked;
  for (std::size_t c = 1; c < header.size(); ++c) {
    for (Factor f : kAllFactors) {
      if (header[c] == factor_name(f)) picked.emplace_back(c, f);
    }
  }
  if (picked.empty()) throw std::runtime_error("csv: no factor columns");

  std::vector<double> times;
  std::vector<std::vector<double>> cols(picked.size());
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " cells");
    }
    auto number = [&](const std::string& s) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad number '" + s +
                                 "'");
      }
      return x;
    };
    times.push_back(number(cells[0]));
    for (std::size_t k = 0; k < picked.size(); ++k) cols[k].push_back(number(cells[picked[k].first]));
  }
  if (times.size() < 3) throw std::runtime_error("csv: need at least 3 rows");
  const double t0 = times.front();
  const double dt = (times.back() - t0) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw std::runtime_error("csv: times must increase");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - (t0 + dt * static_cast<double>(i))) > 1e-3 * dt) {
      throw std::runtime_error("csv: time grid is not uniform at row " + std::to_string(i + 2));
    }
  }
  CsvSeries out;
  out.time = {t0, dt, {}};
  for (std::size_t k = 0; k < picked.size(); ++k) {
    out.factors.emplace_back(picked[k].second, std::move(cols[k]));
  }
  return out;
}

std::string build_report(const ReportInput& in) {
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("scenario", in.scenario);
  line("mode", in.mode);
  line("grid.t0", fmt("%.9g", in.grid.t0));
  line("grid.dt", fmt("%.9g", in.grid.dt));
  line("grid.t_max", fmt("%.9g", in.grid.back()));
  line("grid.points", std::to_string(in.grid.n));

  std::vector<std::pair<Factor, analysis::BackflowReport>> reports;
  for (const auto& [f, v] : in.factors) {
    reports.emplace_back(f, analysis::detect_backflow({in.grid.t0, in.grid.dt, v}));
  }
  for (const auto& [f, rep] : reports) {
    const auto onset = refined_onset(rep, f, in.eval);
    line("onset." + std::string(factor_name(f)), onset ? fmt("%.3f", *onset) : "none");
  }
  for (const auto& [f, rep] : reports) {
    const bool local = f == Factor::kappa1 || f == Factor::kappa2;
    const std::string name(factor_name(f));
    if (local) {
      line("blp." + name, fmt("%.9g", rep.total_gain));
    } else {
      line("gain." + name, fmt("%.9g", rep.total_gain));
      line("intervals." + name, std::to_string(rep.intervals.size()));
    }
  }

  const analysis::BackflowReport* l1 = nullptr;
  const analysis::BackflowReport* l2 = nullptr;
  for (const auto& [f, rep] : reports) {
    if (f == Factor::kappa1) l1 = &rep;
    if (f == Factor::kappa2) l2 = &rep;
  }
  if (!l1) l1 = l2;
  if (!l2) l2 = l1;
  if (l1) {
    bool local_never = true;
    for (const auto& [f, rep] : reports) {
      if (f != Factor::lambda12 && f != Factor::kappa12) continue;
      const auto cmp = analysis::compare_onsets(*l1, *l2, rep);
      line("classification." + std::string(factor_name(f)),
           std::string(analysis::ordering_name(cmp.ordering)));
      local_never = cmp.local_never;
    }
    line("local_never", local_never ? "true" : "false");
  }
  return out;
}

RunConfig figure_config(int n) {
  static const char* const texts[] = {
      "scenario = eq5\ng = 1\n",
      "scenario = eq7\ng = 1\n",
      "scenario = eq9\ng = 1\n",
      "scenario = eq10\n",
      "scenario = eq11\n",
      "scenario = boson\n"
      "boson.A1 = 1\n"
      "boson.Omega1 = 1\n"
      "boson.beta = 0.2\n"
      "boson.clock1.system = 0, 0, inf\n"
      "boson.clock1.ancilla = 1, 0, 0\n"
      "boson.clock2.ancilla = 1, 0, 0\n"
      "boson.override.gamma2 = 0.5\n"
      "boson.override.xi2 = 1.5707963267948966\n",
      "scenario = spinstar\n"
      "spinstar.n1 = 5\nspinstar.n2 = 5\n"
      "spinstar.alpha = 4\nspinstar.beta = 0.01\n"
      "spinstar.B1 = 2\nspinstar.B2 = 2\n"
      "spinstar.J1 = 10\nspinstar.J2 = 10\n"
      "spinstar.theta2 = 0.2\n"
      "spinstar.pair_rule = complete\n",
      "scenario = spinstar\n"
      "spinstar.n1 = 5\nspinstar.n2 = 5\n"
      "spinstar.alpha = 4\nspinstar.beta = 0.01\n"
      "spinstar.B1 = 2\nspinstar.B2 = 2\n"
      "spinstar.J1 = 0\nspinstar.J2 = 0\n"
      "spinstar.theta2 = 0.785\n"
      "spinstar.pair_rule = complete\n",
  };
  if (n < 1 || n > 8) throw std::out_of_range("figure number must be 1..8");
  RunConfig cfg = parse_config(texts[n - 1]);
  cfg.output_stem = "fig" + std::to_string(n);
  return cfg;
}

std::vector<Column> figure_columns(int n) {
  using F = Factor;
  switch (n) {
    case 1:
    case 3:
    case 6:
    case 7: return plain_columns({F::kappa1, F::lambda12});
    case 2:
    case 5: return plain_columns({F::kappa1, F::kappa2, F::kappa12, F::lambda12});
    case 4: {
      auto c = plain_columns({F::kappa1, F::kappa2, F::kappa12, F::lambda12});
      c.push_back({"lambda12_x500", F::lambda12, 500.0});
      return c;
    }
    case 8: {
      auto c = plain_columns({F::kappa1, F::lambda12});
      c.push_back({"lambda12_x1e7", F::lambda12, 1e7});
      return c;
    }
    default: throw std::out_of_range("figure number must be 1..8");
  }
}

std::string figure_notes(int n) {
  std::string out;
  auto note = [&out](const std::string& k, const std::string& v) {
    out += "# note." + k + ": " + v + "\n";
  };
  switch (n) {
    case 4:
    case 5:
      note("time", "t is the shifted time t' = t - 1 measured from the coupling switch");
      note("factors_at_zero", "the printed factors do not start at 1 in shifted time");
      break;
    case 6:
      note("boson.Omega1", "1 (cutoff not given in the caption)");
      note("boson.override",
           "Gamma2 = 0.5 and Xi2 = pi/2 held constant; bath-2 clocks unused");
      note("boson.clock1", "t1(t) = t, t'1(t) = 1 constant");
      break;
    case 7:
    case 8:
      note("spinstar.pair_rule", "complete (pair set not given in the caption)");
      note("spinstar.theta1", "Theta1(t) = t");
      break;
    default: break;
  }
  return out;
}

namespace {

FileSet emit(const RunConfig& cfg, const std::vector<Column>* columns,
             const std::string* meta, const fs::path& dir) {
  ScenarioPlan plan = plan_scenario(cfg);
  if (columns) plan.columns = *columns;
  const FactorTrace trace = evaluate(plan);

  ReportInput in;
  in.scenario = plan.scenario;
  in.mode = std::string(freq::mode_name(cfg.mode));
  in.grid = plan.grid;
  in.eval = &plan.eval;
  for (Factor f : plan.modeled) in.factors.emplace_back(f, trace.moduli(f));
  const std::string report = build_report(in);
  const std::string csv = format_csv(trace, plan.columns);

  ensure_dir(dir);
  FileSet files;
  files.csv = dir / (cfg.stem() + ".csv");
  files.report = dir / (cfg.stem() + ".report");
  write_file(files.csv, csv);
  write_file(files.report, report);
  if (meta) {
    files.meta = dir / (cfg.stem() + ".meta");
    write_file(*files.meta, *meta);
  }
  return files;
}

}  // namespace

FileSet run_to_files(const RunConfig& cfg, const fs::path& dir) {
  return emit(cfg, nullptr, nullptr, dir);
}

FileSet figure_to_files(int n, const fs::path& dir) {
  const RunConfig cfg = figure_config(n);
  const auto columns = figure_columns(n);
  const std::string meta = render_config(cfg) + figure_notes(n);
  return emit(cfg, &columns, &meta, dir);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read from '" + path.string() + "' failed");
  return ss.str();
}

std::string measure(const RunConfig& cfg) {
  if (cfg.input_csv.empty()) throw ConfigError({"measure needs input.csv"});
  const std::string text = read_file(cfg.input_csv);
  CsvSeries series;
  try {
    series = parse_csv(text);
  } catch (const IoError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError("'" + cfg.input_csv + "': " + e.what());
  }
  ReportInput in;
  in.scenario = cfg.has_scenario ? std::string(scenario_name(cfg.scenario)) : "measured";
  in.mode = std::string(freq::mode_name(cfg.mode));
  in.grid = {series.time.t0, series.time.dt, series.factors.front().second.size()};
  in.factors = std::move(series.factors);
  return build_report(in);
}

}  // namespace corrdeph::cli
