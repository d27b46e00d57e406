// bosonbath.hpp
// Ohmic boson baths (spectral density A w exp(-w / Omega)) that acquire
// classical correlations through a Bell pair whose halves dephase in the
// two baths before the system qubits do.
//
//   Gamma_i(t) = int_0^inf A_i e^{-w/Omega_i} coth(2w/beta) (1 - cos(w t_i)) dw
//   Xi_i(t)    = int_0^inf A_i e^{-w/Omega_i}
//                  [2 sin(w (t_i - t'_i)) - 2 sin(w t_i) + 2 sin(w t'_i)] dw
//
//   kappa1   = |exp(-Gamma_1) cos(Xi_1)|
//   lambda12 = |exp(-Gamma_1 - Gamma_2) cos(Xi_1 + Xi_2)|
//
// t_i(t) and t'_i(t) are the accumulated system and ancilla interaction
// times.

#pragma once

#include <limits>
#include <optional>

#include "corrdeph/quad.hpp"

namespace corrdeph::boson {

struct OhmicBathConfig {
  double A1 = 1.0;
  double A2 = 1.0;
  double Omega1 = 1.0;
  double Omega2 = 1.0;
  double beta = 1.0;

  // A_i >= 0, Omega_i > 0, beta > 0; throws std::invalid_argument.
  void validate() const;
};

// Accumulated interaction time offset + |[on, min(t, off)]|: nondecreasing
// with slope 0 or 1.
class InteractionClock {
public:
  InteractionClock() = default;
  InteractionClock(double offset, double on, double off);

  static InteractionClock always_on() { return {0.0, 0.0, kForever}; }
  static InteractionClock window(double on, double off) { return {0.0, on, off}; }
  static InteractionClock constant(double value) { return {value, 0.0, 0.0}; }

  double operator()(double t) const;

  double offset() const { return offset_; }
  double on() const { return on_; }
  double off() const { return off_; }

  static constexpr double kForever = std::numeric_limits<double>::infinity();

private:
  double offset_ = 0.0;
  double on_ = 0.0;
  double off_ = 0.0;
};

struct ClockPair {
  InteractionClock system;   // t_i(t)
  InteractionClock ancilla;  // t'_i(t)
};

// Environment-2 functionals frozen to constants.
struct Fig6Overrides {
  double gamma2_const = 0.5;
  double xi2_phase_const = 0.0;
};

struct BosonFactors {
  double kappa1 = 1.0;
  double lambda12 = 1.0;
};

// Gamma_i(t) >= 0.  i must be 1 or 2.  Throws quad::QuadratureError.
double gamma(const OhmicBathConfig& cfg, const ClockPair& clock, int i, double t,
             const quad::QuadratureSettings& qs = {});

// Xi_i(t).  i must be 1 or 2.
double xi_phase(const OhmicBathConfig& cfg, const ClockPair& clock, int i, double t,
                const quad::QuadratureSettings& qs = {});

BosonFactors eval_boson_factors(const OhmicBathConfig& cfg, const ClockPair& clock1,
                                const ClockPair& clock2,
                                const std::optional<Fig6Overrides>& overrides, double t,
                                const quad::QuadratureSettings& qs = {});

}  // namespace corrdeph::boson
