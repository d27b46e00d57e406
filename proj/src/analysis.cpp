#include "corrdeph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace corrdeph::analysis {

namespace {

double growth_threshold(const std::vector<double>& v, double eps) {
  if (v.empty()) return 0.0;
  return eps * *std::max_element(v.begin(), v.end());
}

// Indices i such that the step i -> i+1 is growth.
std::vector<bool> growth_steps(const std::vector<double>& v, double eps) {
  const double thr = growth_threshold(v, eps);
  std::vector<bool> grow(v.size() > 0 ? v.size() - 1 : 0, false);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) grow[i] = (v[i + 1] - v[i]) > thr;
  return grow;
}

double distance_from_gaps(double da, double db, double gamma) {
  return std::sqrt(db * db * gamma * gamma + da * da);
}

}  // namespace

void TimeSeries::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time series needs dt > 0");
  if (values.size() < 3) throw std::invalid_argument("time series needs at least 3 samples");
}

TimeSeries TimeSeries::of(const FactorTrace& trace, Factor f) {
  return {trace.grid.t0, trace.grid.dt, trace.moduli(f)};
}

double trace_distance(const QubitState& s1, const QubitState& s2, double gamma_mod) {
  const double db = std::abs(s1.b() - s2.b());
  const double pop = 0.5 * (s1.a() - s2.a() + s2.d() - s1.d());
  return distance_from_gaps(pop, db, gamma_mod);
}

double sigma_rate(const TimeSeries& gamma_mod, const QubitState& s1, const QubitState& s2,
                  std::size_t index) {
  gamma_mod.validate();
  if (index == 0 || index + 1 >= gamma_mod.size()) {
    throw std::out_of_range("sigma_rate needs an interior grid index");
  }
  const double ahead = trace_distance(s1, s2, gamma_mod.values[index + 1]);
  const double behind = trace_distance(s1, s2, gamma_mod.values[index - 1]);
  return (ahead - behind) / (2.0 * gamma_mod.dt);
}

double blp_measure_dephasing(const TimeSeries& gamma_mod, double eps) {
  return detect_backflow(gamma_mod, eps).total_gain;
}

double blp_measure_grid(const TimeSeries& gamma_mod, int m, double eps) {
  gamma_mod.validate();
  if (m < 5) throw std::invalid_argument("blp_measure_grid needs m >= 5");
  const auto& g = gamma_mod.values;
  const std::vector<bool> grow = growth_steps(g, eps);

  // Valid grid states as integer coordinates (ia, ix, iy).
  const double h = 1.0 / static_cast<double>(m - 1);
  struct GridState {
    int ia, ix, iy;
  };
  std::vector<GridState> states;
  for (int ia = 0; ia < m; ++ia) {
    const double a = ia * h;
    for (int ix = 0; ix < m; ++ix) {
      for (int iy = 0; iy < m; ++iy) {
        const double x = -0.5 + ix * h;
        const double y = -0.5 + iy * h;
        if (x * x + y * y <= a * (1.0 - a) + 1e-12) states.push_back({ia, ix, iy});
      }
    }
  }

  // The integral depends on a pair only through |a1 - a2| and |b1 - b2|.
  std::set<std::pair<int, int>> gaps;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const int da = std::abs(states[i].ia - states[j].ia);
      const int dx = states[i].ix - states[j].ix;
      const int dy = states[i].iy - states[j].iy;
      gaps.insert({da, dx * dx + dy * dy});
    }
  }

  double best = 0.0;
  for (const auto& [da_idx, db2_idx] : gaps) {
    const double da = da_idx * h;
    const double db = std::sqrt(static_cast<double>(db2_idx)) * h;
    double total = 0.0;
    for (std::size_t k = 0; k < grow.size(); ++k) {
      if (grow[k]) total += distance_from_gaps(da, db, g[k + 1]) - distance_from_gaps(da, db, g[k]);
    }
    best = std::max(best, total);
  }
  return best;
}

BackflowReport detect_backflow(const TimeSeries& series, double eps) {
  series.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("detect_backflow needs eps > 0");
  const auto& v = series.values;
  const std::vector<bool> grow = growth_steps(v, eps);

  BackflowReport report;
  report.grid = series.grid();
  std::size_t i = 0;
  while (i < grow.size()) {
    if (!grow[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < grow.size() && grow[j]) ++j;
    GrowthInterval gi;
    gi.begin = i;
    gi.end = j;
    gi.t_begin = series.time(i);
    gi.t_end = series.time(j);
    gi.gain = v[j] - v[i];
    report.total_gain += gi.gain;
    report.intervals.push_back(gi);
    i = j;
  }

  if (!report.intervals.empty()) {
    const std::size_t b = report.intervals.front().begin;
    double onset = series.time(b);
    if (b > 0) {
      const double left = v[b - 1], mid = v[b], right = v[b + 1];
      const double curvature = left - 2.0 * mid + right;
      if (curvature > 0.0) {
        const double shift = 0.5 * (left - right) / curvature;
        onset += series.dt * std::clamp(shift, -1.0, 1.0);
      }
    }
    report.onset = onset;
  }
  return report;
}

std::string_view ordering_name(OnsetOrdering o) {
  switch (o) {
    case OnsetOrdering::global_earlier: return "global-earlier";
    case OnsetOrdering::global_simultaneous: return "global-simultaneous";
    case OnsetOrdering::global_later: return "global-later";
    case OnsetOrdering::global_never: return "global-never";
  }
  return "?";
}

OnsetComparison compare_onsets(const BackflowReport& local1, const BackflowReport& local2,
                               const BackflowReport& global12) {
  if (!(local1.grid == local2.grid) || !(local1.grid == global12.grid)) {
    throw std::invalid_argument("compare_onsets: reports come from different grids");
  }
  OnsetComparison out;
  if (local1.onset && local2.onset) {
    out.local_onset = std::min(*local1.onset, *local2.onset);
  } else if (local1.onset) {
    out.local_onset = local1.onset;
  } else {
    out.local_onset = local2.onset;
  }
  out.local_never = !out.local_onset.has_value();
  out.global_onset = global12.onset;

  if (!out.global_onset) {
    out.ordering = OnsetOrdering::global_never;
  } else if (!out.local_onset) {
    out.ordering = OnsetOrdering::global_earlier;
  } else {
    const double tol = 0.5 * global12.grid.dt;
    const double diff = *out.global_onset - *out.local_onset;
    if (std::abs(diff) <= tol) {
      out.ordering = OnsetOrdering::global_simultaneous;
    } else {
      out.ordering = diff < 0.0 ? OnsetOrdering::global_earlier : OnsetOrdering::global_later;
    }
  }
  return out;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace corrdeph::analysis
