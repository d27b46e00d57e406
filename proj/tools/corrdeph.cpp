// corrdeph: run scenarios, reproduce figures, measure existing traces.
//
//   corrdeph run --config FILE [--out DIR]
//   corrdeph fig N [--out DIR]
//   corrdeph measure --config FILE
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "corrdeph/runner.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kIoError = 4;

corrdeph::cli::RunConfig load(const std::string& path) {
  return corrdeph::cli::parse_config(corrdeph::cli::read_file(path));
}

void print_files(const corrdeph::cli::FileSet& files) {
  std::cout << "wrote " << files.csv.string() << "\n";
  std::cout << "wrote " << files.report.string() << "\n";
  if (files.meta) std::cout << "wrote " << files.meta->string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace corrdeph::cli;

  CLI::App app{"Two-qubit dephasing under correlated environments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int figure = 0;

  auto* run = app.add_subcommand("run", "Evaluate a configured scenario");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");

  auto* fig = app.add_subcommand("fig", "Reproduce one of the built-in figures");
  fig->add_option("N", figure, "Figure number 1..8")->required();
  fig->add_option("--out", out_dir, "Output directory")->default_val(".");

  auto* meas = app.add_subcommand("measure", "Analyse a previously written CSV");
  meas->add_option("--config", config_path, "Configuration with input.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      const RunConfig cfg = load(config_path);
      if (!cfg.has_scenario) throw ConfigError({"run needs a scenario"});
      print_files(run_to_files(cfg, out_dir.empty() ? cfg.output_dir : out_dir));
    } else if (*fig) {
      if (figure < 1 || figure > 8) {
        std::cerr << "error: figure number must be 1..8, got " << figure << "\n";
        return kConfigError;
      }
      print_files(figure_to_files(figure, out_dir));
    } else if (*meas) {
      std::cout << measure(load(config_path));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return 0;
}
