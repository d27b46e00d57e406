// analysis.hpp
// Trace-distance non-Markovianity for dephasing channels and detection of
// information backflow in decoherence-factor traces.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "corrdeph/core.hpp"
#include "corrdeph/trace.hpp"

namespace corrdeph::analysis {

// Growth threshold, relative to the series maximum.
inline constexpr double kDefaultGrowthEps = 1e-9;

struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  TimeGrid grid() const { return {t0, dt, values.size()}; }

  // dt > 0 and at least 3 samples; throws std::invalid_argument.
  void validate() const;

  static TimeSeries of(const FactorTrace& trace, Factor f);
};

// Trace distance between two single-qubit states after both are dephased
// by a factor of modulus gamma_mod:
//   sqrt(|b1 - b2|^2 gamma_mod^2 + (a1 - a2 + d2 - d1)^2 / 4).
double trace_distance(const QubitState& s1, const QubitState& s2, double gamma_mod);

// Central-difference time derivative of the trace distance at an interior
// grid index.  Throws std::out_of_range at the boundary.
double sigma_rate(const TimeSeries& gamma_mod, const QubitState& s1, const QubitState& s2,
                  std::size_t index);

// N = sum over growth runs of (end value - start value).  For dephasing
// channels the maximizing pair is antipodal on the equator (a1 = a2,
// |b1 - b2| = 1), where the trace distance equals |gamma| itself.
double blp_measure_dephasing(const TimeSeries& gamma_mod, double eps = kDefaultGrowthEps);

// Brute-force maximization over pairs of states with a on m levels in
// [0, 1] and b on an m x m grid over [-1/2, 1/2]^2 restricted to the
// positivity disc.  Growth steps are those of the |gamma| series.
double blp_measure_grid(const TimeSeries& gamma_mod, int m, double eps = kDefaultGrowthEps);

struct GrowthInterval {
  std::size_t begin = 0;  // grid index of the local minimum
  std::size_t end = 0;    // grid index of the following local maximum
  double t_begin = 0.0;
  double t_end = 0.0;
  double gain = 0.0;
};

struct BackflowReport {
  TimeGrid grid;
  std::optional<double> onset;
  std::vector<GrowthInterval> intervals;
  double total_gain = 0.0;
};

// A step i -> i+1 is growth when v[i+1] - v[i] > eps * max(v).  The onset
// is the start of the first growth run, refined by a three-point parabola
// through the neighbouring samples.
BackflowReport detect_backflow(const TimeSeries& series, double eps = kDefaultGrowthEps);

enum class OnsetOrdering { global_earlier, global_simultaneous, global_later, global_never };

std::string_view ordering_name(OnsetOrdering o);

struct OnsetComparison {
  OnsetOrdering ordering = OnsetOrdering::global_never;
  bool local_never = true;
  std::optional<double> global_onset;
  std::optional<double> local_onset;  // earlier of the two local onsets
};

// Compares the global onset with the earlier local one.  Onsets closer
// than half a grid step count as simultaneous.  Throws
// std::invalid_argument when the reports come from different grids.
OnsetComparison compare_onsets(const BackflowReport& local1, const BackflowReport& local2,
                               const BackflowReport& global12);

// Golden-section search for a minimum of a unimodal f on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-9);

}  // namespace corrdeph::analysis
