#include "corrdeph/freqkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrdeph::freq {

namespace {

constexpr std::size_t kK1 = 0, kK2 = 1, kK12 = 2, kL12 = 3;

DephasingFactors evaluate(double w0, const std::array<PhasePoint, 4>& phases,
                          const std::array<std::optional<double>, 4>& overrides,
                          TransformMode mode, const quad::QuadratureSettings& qs) {
  const double z = quad::normalization(w0);
  DephasingFactors out;
  for (std::size_t i = 0; i < 4; ++i) {
    double value;
    if (overrides[i]) {
      value = *overrides[i];
    } else {
      const auto& ph = phases[i];
      const double re = quad::integrate_gauss_cos({w0, ph.slope, ph.phase}, qs);
      if (mode == TransformMode::cosine_transform) {
        value = std::abs(2.0 * z * re);
      } else {
        const double im = quad::integrate_gauss_cos(
            {w0, ph.slope, ph.phase - 0.5 * std::numbers::pi}, qs);
        value = 2.0 * z * std::hypot(re, im);
      }
    }
    out.get(kAllFactors[i]) = value;
  }
  return out;
}

}  // namespace

std::string_view mode_name(TransformMode m) {
  return m == TransformMode::cosine_transform ? "cosine_transform" : "complex_modulus";
}

TransformMode parse_mode(std::string_view name) {
  if (name == "cosine_transform") return TransformMode::cosine_transform;
  if (name == "complex_modulus") return TransformMode::complex_modulus;
  throw std::invalid_argument("unknown transform mode '" + std::string(name) + "'");
}

std::array<PhasePoint, 4> FrequencyScenario::phases_at(double t) const {
  std::array<PhasePoint, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& k = kernels[i];
    out[i] = {k.p * t + k.q, k.r * t + k.s};
  }
  return out;
}

Preset parse_preset(std::string_view name) {
  if (name == "eq5") return Preset::eq5;
  if (name == "eq7") return Preset::eq7;
  if (name == "eq9") return Preset::eq9;
  if (name == "eq10") return Preset::eq10;
  if (name == "eq11") return Preset::eq11;
  throw std::invalid_argument("unknown scenario preset '" + std::string(name) + "'");
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::eq5: return "eq5";
    case Preset::eq7: return "eq7";
    case Preset::eq9: return "eq9";
    case Preset::eq10: return "eq10";
    case Preset::eq11: return "eq11";
  }
  return "?";
}

FrequencyScenario scenario_preset(Preset which, double g) {
  FrequencyScenario sc;
  sc.name = std::string(preset_name(which));
  auto& k = sc.kernels;
  switch (which) {
    case Preset::eq5:
      // Shared envelope centred at w = 1 in both environments.
      sc.w0 = 1.0;
      k[kK1] = {2 * g, 0, 0, 0};
      k[kK2] = {2 * g, 0, 0, 0};
      k[kL12] = {4 * g, 0, 0, 0};
      sc.constant_overrides[kK12] = 1.0;
      break;
    case Preset::eq7:
      // Environment 2 shifted by one frequency unit.
      sc.w0 = 0.0;
      k[kK1] = {2 * g, 0, 0, 0};
      k[kK2] = {2 * g, 0, 2 * g, 0};
      k[kL12] = {4 * g, 0, 2 * g, 0};
      k[kK12] = {0, 0, 2 * g, 0};
      break;
    case Preset::eq9:
      sc.w0 = 0.0;
      k[kK1] = {2 * g, 0, 0, 0};
      k[kK2] = {2 * g, 0, 0, 0};
      k[kL12] = {4 * g, 0, 0, 0};
      sc.constant_overrides[kK12] = 1.0;
      break;
    case Preset::eq10:
      // g1: 3 -> 1 at t = 1, g2 = 2; shifted time t'.
      sc.w0 = 0.0;
      k[kK1] = {1, 3, 0, 0};
      k[kK2] = {2, 2, 0, 0};
      k[kL12] = {3, 5, 0, 0};
      k[kK12] = {-1, 1, 0, 0};
      sc.shifted_time = true;
      break;
    case Preset::eq11:
      // g1 = 2, g2: 1 -> 3 at t = 1; shifted time t'.
      sc.w0 = 0.0;
      k[kK1] = {1, 2, 0, 0};
      k[kK2] = {2, 1, 0, 0};
      k[kL12] = {5, 3, 0, 0};
      k[kK12] = {-1, 1, 0, 0};
      sc.shifted_time = true;
      break;
  }
  return sc;
}

FrequencyScenario scenario_preset(std::string_view name, double g) {
  return scenario_preset(parse_preset(name), g);
}

DephasingFactors eval_factors(const FrequencyScenario& sc, double t,
                              const quad::QuadratureSettings& qs) {
  if (!(t >= 0.0)) throw std::invalid_argument("eval_factors: t must be >= 0");
  return evaluate(sc.w0, sc.phases_at(t), sc.constant_overrides, sc.mode, qs);
}

double initial_coherence_error(const FrequencyScenario& sc, const quad::QuadratureSettings& qs) {
  const DephasingFactors f = eval_factors(sc, 0.0, qs);
  double worst = 0.0;
  for (Factor which : kAllFactors) worst = std::max(worst, std::abs(f.get(which) - 1.0));
  return worst;
}

CouplingSchedule::CouplingSchedule(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw std::invalid_argument("coupling schedule has no breakpoints");
  if (points_.front().time != 0.0) {
    throw std::invalid_argument("coupling schedule must start at t = 0");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].time) || !std::isfinite(points_[i].g)) {
      throw std::invalid_argument("coupling schedule entries must be finite");
    }
    if (i > 0 && !(points_[i].time > points_[i - 1].time)) {
      throw std::invalid_argument("coupling schedule times must be strictly increasing");
    }
  }
}

CouplingSchedule CouplingSchedule::constant(double g) { return CouplingSchedule({{0.0, g}}); }

double CouplingSchedule::coupling(double t) const {
  double g = points_.front().g;
  for (const auto& bp : points_) {
    if (bp.time <= t) g = bp.g;
  }
  return g;
}

double CouplingSchedule::accumulated_phase(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("accumulated_phase: t must be >= 0");
  double integral = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double start = points_[i].time;
    if (start >= t) break;
    const double end = (i + 1 < points_.size()) ? std::min(points_[i + 1].time, t) : t;
    integral += points_[i].g * (end - start);
  }
  return 2.0 * integral;
}

std::array<PhasePoint, 4> ScheduledScenario::phases_at(double t) const {
  const double theta1 = schedule1.accumulated_phase(t);
  const double theta2 = schedule2.accumulated_phase(t);
  std::array<PhasePoint, 4> out{};
  out[kK1] = {theta1, c1 * theta1};
  out[kK2] = {theta2, c2 * theta2};
  out[kL12] = {theta1 + theta2, c1 * theta1 + c2 * theta2};
  out[kK12] = {theta1 - theta2, c1 * theta1 - c2 * theta2};
  return out;
}

ScheduledScenario derive_kernels(double c1, double c2, CouplingSchedule schedule1,
                                 CouplingSchedule schedule2, double w0) {
  if (!(w0 >= 0.0)) throw std::invalid_argument("derive_kernels: w0 must be >= 0");
  ScheduledScenario sc;
  sc.w0 = w0;
  sc.c1 = c1;
  sc.c2 = c2;
  sc.schedule1 = std::move(schedule1);
  sc.schedule2 = std::move(schedule2);
  return sc;
}

DephasingFactors eval_factors(const ScheduledScenario& sc, double t,
                              const quad::QuadratureSettings& qs) {
  if (!(t >= 0.0)) throw std::invalid_argument("eval_factors: t must be >= 0");
  return evaluate(sc.w0, sc.phases_at(t), {}, sc.mode, qs);
}

}  // namespace corrdeph::freq
