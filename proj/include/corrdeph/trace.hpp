// trace.hpp
// Uniform time grids and factor traces sampled on them.

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrdeph/core.hpp"

namespace corrdeph {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 1e-3;
  std::size_t n = 0;

  double at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double back() const { return at(n - 1); }

  // Points t0, t0 + dt, ... up to t_max (inclusive, to within 1e-9 dt).
  // Throws std::invalid_argument if dt <= 0 or t_max <= t0.
  static TimeGrid span(double t0, double dt, double t_max);

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct FactorTrace {
  TimeGrid grid;
  std::vector<DephasingFactors> samples;

  // |factor| at every grid point.
  std::vector<double> moduli(Factor f) const;
};

using FactorEvaluator = std::function<DephasingFactors(double)>;

// Thrown by sample() when the evaluator fails at a specific time.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

private:
  double t_;
};

// Evaluates at every grid point in order.  Any exception from the
// evaluator is rethrown as EvaluationError carrying the failing time.
FactorTrace sample(const FactorEvaluator& eval, const TimeGrid& grid);

}  // namespace corrdeph
