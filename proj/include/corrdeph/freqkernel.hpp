// freqkernel.hpp
// Decoherence factors for two qubits coupled to environments with a
// continuous, classically correlated frequency distribution.
//
// Every factor has the form
//
//     |2 Z int_0^inf exp(-(w - w0)^2) cos(P(t) w + C(t)) dw|,
//
// with Z = quad::normalization(w0).  For fixed couplings P and C are
// affine in t (KernelPhase); with piecewise-constant couplings they follow
// the accumulated phases of a CouplingSchedule.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrdeph/core.hpp"
#include "corrdeph/quad.hpp"

namespace corrdeph::freq {

// Total phase (p t + q) w + (r t + s).
struct KernelPhase {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;

  friend bool operator==(const KernelPhase&, const KernelPhase&) = default;
};

// Slope P and constant C of the phase P w + C at one instant.
struct PhasePoint {
  double slope = 0.0;
  double phase = 0.0;
};

enum class TransformMode {
  cosine_transform,  // |2Z int cos(...)|, the printed form
  complex_modulus,   // |2Z int exp(i(...))|, sine transform added in quadrature
};

std::string_view mode_name(TransformMode m);
TransformMode parse_mode(std::string_view name);

struct FrequencyScenario {
  std::string name;
  double w0 = 0.0;
  // Indexed in kAllFactors order: k1, k2, k12, l12.
  std::array<KernelPhase, 4> kernels{};
  std::array<std::optional<double>, 4> constant_overrides{};
  TransformMode mode = TransformMode::cosine_transform;
  // True when t is a shifted time t' = t - t_switch; the factors then do
  // not start at 1.
  bool shifted_time = false;

  std::array<PhasePoint, 4> phases_at(double t) const;
};

enum class Preset { eq5, eq7, eq9, eq10, eq11 };

Preset parse_preset(std::string_view name);
std::string_view preset_name(Preset p);

// Literal transcriptions.  g is the common coupling for eq5/eq7/eq9 and
// ignored by the control presets eq10/eq11, which are expressed in the
// shifted time t' = t - 1.
FrequencyScenario scenario_preset(Preset which, double g = 1.0);
FrequencyScenario scenario_preset(std::string_view name, double g = 1.0);

// Moduli of the four factors at time t.  Throws quad::QuadratureError.
DephasingFactors eval_factors(const FrequencyScenario& sc, double t,
                              const quad::QuadratureSettings& qs = {});

// Largest deviation from 1 of any factor at t = 0.
double initial_coherence_error(const FrequencyScenario& sc,
                               const quad::QuadratureSettings& qs = {});

// Piecewise-constant coupling g(t).  Each breakpoint (time, g) sets the
// coupling from `time` onwards; the first breakpoint must be at t = 0.
class CouplingSchedule {
public:
  struct Breakpoint {
    double time;
    double g;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  explicit CouplingSchedule(std::vector<Breakpoint> breakpoints);
  static CouplingSchedule constant(double g);

  double coupling(double t) const;
  // Theta(t) = 2 int_0^t g(s) ds.
  double accumulated_phase(double t) const;
  const std::vector<Breakpoint>& breakpoints() const { return points_; }

private:
  std::vector<Breakpoint> points_;
};

// Environment i holds frequency w + c_i; the phase picked up by qubit i is
// (w + c_i) Theta_i(t).  k1, k2 follow phi_1, phi_2; l12 follows
// phi_1 + phi_2 and k12 follows phi_1 - phi_2.
struct ScheduledScenario {
  double w0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  CouplingSchedule schedule1 = CouplingSchedule::constant(0.0);
  CouplingSchedule schedule2 = CouplingSchedule::constant(0.0);
  TransformMode mode = TransformMode::cosine_transform;

  std::array<PhasePoint, 4> phases_at(double t) const;
};

ScheduledScenario derive_kernels(double c1, double c2, CouplingSchedule schedule1,
                                 CouplingSchedule schedule2, double w0);

DephasingFactors eval_factors(const ScheduledScenario& sc, double t,
                              const quad::QuadratureSettings& qs = {});

}  // namespace corrdeph::freq
