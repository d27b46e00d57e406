// runner.hpp
// Turns a RunConfig into factor traces, CSV text and key = value reports,
// and holds the built-in figure configurations.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrdeph/analysis.hpp"
#include "corrdeph/config.hpp"
#include "corrdeph/trace.hpp"

namespace corrdeph::cli {

// A CSV column: |factor| times scale.
struct Column {
  std::string name;
  Factor factor;
  double scale = 1.0;
};

struct ScenarioPlan {
  std::string scenario;
  FactorEvaluator eval;
  TimeGrid grid;
  std::vector<Column> columns;
  // Factors the scenario actually models; the others are reported as 1.
  std::vector<Factor> modeled;
};

// Evaluation failed; carries the scenario and the failing time.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& scenario, double t, const std::string& what);
  double time() const { return t_; }

private:
  double t_;
};

// I/O failure with the offending path in the message.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requires cfg.has_scenario.  Throws ConfigError for settings that only
// fail when the model is built.
ScenarioPlan plan_scenario(const RunConfig& cfg);

// Throws NumericalError.
FactorTrace evaluate(const ScenarioPlan& plan);

// Header `t,<names>`, 9 significant digits, LF line endings.
std::string format_csv(const FactorTrace& trace, const std::vector<Column>& columns);

// Parses format_csv output.  Columns other than t and the four factor
// names are ignored.  Throws std::runtime_error on malformed input.
struct CsvSeries {
  analysis::TimeSeries time;  // t0, dt; values unused
  std::vector<std::pair<Factor, std::vector<double>>> factors;
};
CsvSeries parse_csv(const std::string& text);

struct ReportInput {
  std::string scenario;
  std::string mode;
  TimeGrid grid;
  std::vector<std::pair<Factor, std::vector<double>>> factors;
  // When set, onsets are refined by golden-section search on |factor|.
  const FactorEvaluator* eval = nullptr;
};

std::string build_report(const ReportInput& in);

RunConfig figure_config(int n);
std::vector<Column> figure_columns(int n);
// Parameters the captions leave open, as `#` comment lines so the
// metadata file stays a valid configuration.
std::string figure_notes(int n);

struct FileSet {
  std::filesystem::path csv;
  std::filesystem::path report;
  std::optional<std::filesystem::path> meta;
};

// Evaluates and writes <dir>/<stem>.csv and <stem>.report.
FileSet run_to_files(const RunConfig& cfg, const std::filesystem::path& dir);
FileSet figure_to_files(int n, const std::filesystem::path& dir);

// Reads cfg.input_csv and returns the report text.
std::string measure(const RunConfig& cfg);

// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace corrdeph::cli
