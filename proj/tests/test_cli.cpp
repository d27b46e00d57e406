#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "corrdeph/runner.hpp"

using namespace corrdeph;
using namespace corrdeph::cli;
namespace fs = std::filesystem;

namespace {

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& s : e.errors()) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

std::string report_value(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  return "<missing>";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("corrdeph_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("defaults are filled in") {
  const auto cfg = parse_config("scenario = eq9\ngrid.t_max = 3.0\n");
  CHECK(cfg.scenario == ScenarioKind::eq9);
  CHECK(cfg.grid.t0 == 0.0);
  CHECK(cfg.grid.dt == 1e-3);
  CHECK(cfg.grid.t_max == 3.0);
  CHECK(cfg.real("g") == 1.0);
  CHECK(cfg.mode == freq::TransformMode::cosine_transform);
  CHECK(cfg.stem() == "eq9");
}

TEST_CASE("coupling example") {
  const auto cfg = parse_config("# NM-NM\nscenario = eq5   # preset\ng = 1.0\n");
  CHECK(cfg.scenario == ScenarioKind::eq5);
  CHECK(cfg.real("g") == 1.0);
}

TEST_CASE("J without B is rejected") {
  const auto errs = errors_of("spinstar.J1 = 10\nspinstar.B1 = 0\n");
  bool jb = false;
  for (const auto& e : errs) jb = jb || e.find("J/B") != std::string::npos;
  CHECK(jb);
  // Also within a complete spinstar config.
  try {
    parse_config(
        "scenario = spinstar\nspinstar.n1 = 2\nspinstar.n2 = 2\nspinstar.beta = 1\n"
        "spinstar.J1 = 10\nspinstar.B1 = 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "J/B"));
  }
}

TEST_CASE("all errors are reported together") {
  const auto errs = errors_of(
      "scenario = spinstar\n"
      "spinstar.n1 = 2.5\n"
      "spinstar.beta = -1\n"
      "bogus = 3\n"
      "g = 2\n"
      "grid.dt = abc\n"
      "no equals sign\n");
  CHECK(errs.size() >= 6);
  auto has = [&](const std::string& needle) {
    for (const auto& e : errs)
      if (e.find(needle) != std::string::npos) return true;
    return false;
  };
  CHECK(has("spinstar.n1"));
  CHECK(has("spinstar.beta"));
  CHECK(has("unknown key 'bogus'"));
  CHECK(has("does not apply"));
  CHECK(has("grid.dt"));
  CHECK(has("line 7"));
  CHECK(has("missing required key 'spinstar.n2'"));
}

TEST_CASE("grid and scenario checks") {
  CHECK_FALSE(errors_of("scenario = eq5\ngrid.t0 = 1\ngrid.t_max = 1\n").empty());
  CHECK_FALSE(errors_of("scenario = eq5\ngrid.dt = 0\n").empty());
  CHECK_FALSE(errors_of("g = 1\n").empty());
  CHECK_FALSE(errors_of("scenario = eq12\n").empty());
  CHECK_FALSE(errors_of("scenario = eq5\nscenario = eq7\n").empty());
  CHECK_FALSE(errors_of("scenario = eq5\nmode = sine\n").empty());
  CHECK(errors_of("input.csv = x.csv\n").empty());
}

TEST_CASE("scenario-specific rules") {
  // Boson requires A1 and beta; overrides come in pairs.
  CHECK(errors_of("scenario = boson\n").size() == 2);
  CHECK_FALSE(errors_of("scenario = boson\nboson.A1 = 1\nboson.beta = 1\n"
                        "boson.override.gamma2 = 0.5\n")
                  .empty());
  CHECK_FALSE(errors_of("scenario = boson\nboson.A1 = 1\nboson.beta = 1\n"
                        "boson.clock1.system = 0, 2, 1\n")
                  .empty());
  // Custom kernels need all four factors and must start at one.
  CHECK_FALSE(errors_of("scenario = custom-kernel\nkernel.k1 = 2, 0, 0, 0\n").empty());
  CHECK(errors_of("scenario = custom-kernel\nkernel.k1 = 2, 0, 0, 0\nkernel.k2 = 1, 0, 1, 0\n"
                  "kernel.k12 = 0, 0, 1, 0\nkernel.l12.const = 1\n")
            .empty());
  CHECK_FALSE(errors_of("scenario = custom-kernel\nkernel.k1 = 2, 1, 0, 0\nkernel.k2 = 1, 0, 1, 0\n"
                        "kernel.k12 = 0, 0, 1, 0\nkernel.l12.const = 1\n")
                  .empty());
  CHECK_FALSE(errors_of("scenario = custom-kernel\nkernel.k1 = 2, 0, 0\n").empty());
  CHECK(errors_of("scenario = custom-kernel\nschedule.g1 = 0:1.5, 1:0.5\nschedule.g2 = 0:1\n")
            .empty());
  CHECK_FALSE(errors_of("scenario = custom-kernel\nschedule.g1 = 0:1.5, 0:0.5\n"
                        "schedule.g2 = 0:1\n")
                  .empty());
  CHECK_FALSE(errors_of("scenario = custom-kernel\nschedule.g1 = 1:1\nschedule.g2 = 0:1\n").empty());
  // Spin star size budget and coupling lists.
  CHECK_FALSE(errors_of("scenario = spinstar\nspinstar.n1 = 20\nspinstar.n2 = 5\n"
                        "spinstar.beta = 1\n")
                  .empty());
  CHECK_FALSE(errors_of("scenario = spinstar\nspinstar.n1 = 2\nspinstar.n2 = 2\n"
                        "spinstar.beta = 1\nspinstar.g1 = 1, 2, 3\n")
                  .empty());
  CHECK_FALSE(errors_of("scenario = spinstar\nspinstar.n1 = 2\nspinstar.n2 = 2\n"
                        "spinstar.beta = 1\nspinstar.pair_rule = ring\n"
                        "spinstar.enumeration = symmetric\n")
                  .empty());
}

TEST_CASE("render round-trips") {
  std::vector<RunConfig> configs;
  for (int n = 1; n <= 8; ++n) configs.push_back(figure_config(n));
  configs.push_back(parse_config(
      "scenario = custom-kernel\nw0 = 0.5\nmode = complex_modulus\n"
      "schedule.g1 = 0:1.5, 1:0.5\nschedule.g2 = 0:1, 0.25:0.3333333333333333\n"
      "schedule.c1 = 0.1\ngrid.dt = 0.01\ngrid.t_max = 2\noutput.dir = out dir\n"));
  configs.push_back(parse_config(
      "scenario = spinstar\nspinstar.n1 = 3\nspinstar.n2 = 2\nspinstar.beta = 0.1\n"
      "spinstar.g1 = 0.1, 0.2, 0.30000000000000004\nspinstar.g2 = 1e-3, 7\n"
      "spinstar.pair_rule = ring\noutput.stem = ring\n"));
  configs.push_back(parse_config("input.csv = /tmp/some.csv\n"));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    std::ostringstream text;
    text.precision(17);
    text << "scenario = boson\nboson.A1 = " << u(rng) << "\nboson.beta = " << u(rng) + 0.01
         << "\nboson.Omega2 = " << u(rng) + 0.01 << "\nboson.clock2.ancilla = " << u(rng)
         << ", 0.5, " << 0.5 + u(rng) << "\ngrid.dt = " << u(rng) * 1e-3 + 1e-4
         << "\ngrid.t_max = " << 1.0 + u(rng) << "\n";
    configs.push_back(parse_config(text.str()));
  }
  for (const auto& c : configs) CHECK(parse_config(render_config(c)) == c);
}

TEST_CASE("format_real is exact") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    CHECK(std::stod(format_real(x)) == x);
  }
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("CSV format and parse") {
  auto cfg = parse_config("scenario = eq9\ngrid.dt = 0.01\ngrid.t_max = 3\n");
  const auto plan = plan_scenario(cfg);
  const auto trace = evaluate(plan);
  const std::string csv = format_csv(trace, plan.columns);
  CHECK(csv.rfind("t,kappa1,kappa2,kappa12,lambda12\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.find(",\n") == std::string::npos);
  CHECK(csv.back() == '\n');

  const auto parsed = parse_csv(csv);
  CHECK(parsed.factors.size() == 4);
  CHECK(parsed.time.dt == doctest::Approx(0.01));
  const auto& k1 = parsed.factors[0].second;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    const double t = 0.01 * static_cast<double>(i);
    CHECK(std::abs(k1[i] - std::exp(-t * t)) < 1e-8);
  }
  CHECK_THROWS(parse_csv("x,kappa1\n0,1\n"));
  CHECK_THROWS(parse_csv("t,kappa1\n0,1\n1,0.5\n3,0.2\n"));
  CHECK_THROWS(parse_csv("t,kappa1\n0,1\n1,zz\n2,0.2\n"));
}

TEST_CASE("report for the NM-NM preset") {
  auto cfg = parse_config("scenario = eq5\ng = 1.0\n");
  const auto plan = plan_scenario(cfg);
  const auto trace = evaluate(plan);
  ReportInput in{plan.scenario, "cosine_transform", plan.grid, {}, &plan.eval};
  for (Factor f : plan.modeled) in.factors.emplace_back(f, trace.moduli(f));
  const auto report = build_report(in);
  const double onset = std::stod(report_value(report, "onset.lambda12"));
  CHECK(std::abs(onset - 0.36) <= 0.02);
  CHECK(report_value(report, "onset.kappa12") == "none");
  CHECK(report_value(report, "classification.lambda12") == "global-earlier");
  CHECK(report_value(report, "local_never") == "false");
}

TEST_CASE("run writes deterministic files") {
  const auto dir = scratch("run");
  auto cfg = parse_config("scenario = eq9\ngrid.dt = 0.01\noutput.stem = m\n");
  const auto a = run_to_files(cfg, dir / "a");
  const auto b = run_to_files(cfg, dir / "b");
  CHECK(read_file(a.csv) == read_file(b.csv));
  CHECK(read_file(a.report) == read_file(b.report));
  CHECK(a.csv.filename() == "m.csv");
  const std::string report = read_file(a.report);
  CHECK(report_value(report, "classification.lambda12") == "global-never");
  CHECK(report_value(report, "blp.kappa1") == "0");

  // Measuring the written CSV gives the same analysis, without refinement.
  RunConfig m = parse_config("input.csv = " + a.csv.string() + "\n");
  const std::string measured = measure(m);
  CHECK(report_value(measured, "onset.lambda12") == "none");
  CHECK(report_value(measured, "grid.points") == "301");
  fs::remove_all(dir);
}

TEST_CASE("empty grid fails before any file is written") {
  const auto dir = scratch("empty");
  CHECK_THROWS_AS(parse_config("scenario = eq5\ngrid.t0 = 2\ngrid.t_max = 1\n"), ConfigError);
  RunConfig cfg = parse_config("scenario = eq5\n");
  cfg.grid.t_max = cfg.grid.t0;
  CHECK_THROWS_AS(run_to_files(cfg, dir), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("numerical failures carry scenario and time") {
  ScenarioPlan plan;
  plan.scenario = "eq5";
  plan.grid = TimeGrid::span(0.0, 0.5, 2.0);
  plan.eval = [](double t) -> DephasingFactors {
    if (t > 1.2) throw quad::QuadratureError("no convergence", 0.0, 1.0);
    return {};
  };
  try {
    evaluate(plan);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.time() == 1.5);
    CHECK(std::string(e.what()).find("eq5") != std::string::npos);
    CHECK(std::string(e.what()).find("1.5") != std::string::npos);
  }
}

TEST_CASE("figure configurations") {
  for (int n = 1; n <= 8; ++n) CHECK(figure_config(n).stem() == "fig" + std::to_string(n));
  CHECK_THROWS_AS(figure_config(0), std::out_of_range);
  CHECK_THROWS_AS(figure_config(9), std::out_of_range);
  CHECK(figure_config(6).real("boson.Omega1") == 1.0);
  CHECK(figure_config(7).word("spinstar.pair_rule") == "complete");
  CHECK(figure_config(7).real("spinstar.J1") == 10.0);
  CHECK(figure_config(8).real("spinstar.theta2") == 0.785);
  CHECK(figure_notes(6).find("Omega1") != std::string::npos);
  CHECK(figure_notes(7).find("pair_rule") != std::string::npos);
  // The metadata stays a valid configuration.
  for (int n = 1; n <= 8; ++n) {
    const auto meta = render_config(figure_config(n)) + figure_notes(n);
    CHECK(parse_config(meta) == figure_config(n));
  }
}

TEST_CASE("figure files") {
  const auto dir = scratch("figs");
  const auto f3 = figure_to_files(3, dir);
  const auto csv3 = parse_csv(read_file(f3.csv));
  CHECK(read_file(f3.csv).rfind("t,kappa1,lambda12\n", 0) == 0);
  for (std::size_t i = 0; i < csv3.factors[0].second.size(); ++i) {
    const double t = csv3.time.t0 + csv3.time.dt * static_cast<double>(i);
    CHECK(std::abs(csv3.factors[0].second[i] - std::exp(-t * t)) < 1e-8);
    CHECK(std::abs(csv3.factors[1].second[i] - std::exp(-4.0 * t * t)) < 1e-8);
  }
  REQUIRE(f3.meta);
  CHECK(fs::exists(*f3.meta));

  const auto f4 = figure_to_files(4, dir);
  const std::string csv4 = read_file(f4.csv);
  CHECK(csv4.rfind("t,kappa1,kappa2,kappa12,lambda12,lambda12_x500\n", 0) == 0);
  std::istringstream lines4(csv4);
  std::string row0;
  std::getline(lines4, row0);
  std::getline(lines4, row0);
  const double scaled = std::stod(row0.substr(row0.rfind(',') + 1));
  CHECK(std::abs(scaled - 0.965) < 1e-3);

  const auto f8 = figure_to_files(8, dir);
  const std::string csv8 = read_file(f8.csv);
  CHECK(csv8.rfind("t,kappa1,lambda12,lambda12_x1e7\n", 0) == 0);
  std::istringstream rows(csv8);
  std::string line;
  std::getline(rows, line);
  double biggest = 0.0;
  while (std::getline(rows, line)) biggest = std::max(biggest, std::stod(line.substr(line.rfind(',') + 1)));
  CHECK(biggest > 0.1);
  CHECK(biggest < 10.0);
  const auto meta6 = figure_to_files(6, dir).meta;
  CHECK(read_file(*meta6).find("boson.Omega1 = 1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("I/O errors name the path") {
  try {
    read_file("/nonexistent/dir/x.csv");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(run_to_files(parse_config("scenario = eq9\ngrid.dt = 0.1\n"),
                               "/proc/corrdeph_cannot_write"),
                  IoError);
}
