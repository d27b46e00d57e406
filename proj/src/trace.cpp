#include "corrdeph/trace.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrdeph {

TimeGrid TimeGrid::span(double t0, double dt, double t_max) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("grid: dt must be > 0");
  if (!(t_max > t0)) throw std::invalid_argument("grid: t_max must exceed t0");
  const double steps = std::floor((t_max - t0) / dt + 1e-9);
  return {t0, dt, static_cast<std::size_t>(steps) + 1};
}

std::vector<double> FactorTrace::moduli(Factor f) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(std::abs(s.get(f)));
  return out;
}

FactorTrace sample(const FactorEvaluator& eval, const TimeGrid& grid) {
  FactorTrace trace{grid, {}};
  trace.samples.reserve(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    try {
      trace.samples.push_back(eval(t));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg.precision(9);
      msg << "evaluation failed at t=" << t << ": " << e.what();
      throw EvaluationError(msg.str(), t);
    }
  }
  return trace;
}

}  // namespace corrdeph
