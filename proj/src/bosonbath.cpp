#include "corrdeph/bosonbath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace corrdeph::boson {

namespace {

// exp(-w / Omega) is below 5e-18 past 40 Omega.
constexpr double kCutoffMultiple = 40.0;
// Below this argument coth(x) is replaced by its Laurent series.
constexpr double kCothSeriesBelow = 1e-3;

double coth(double x) {
  if (x < kCothSeriesBelow) {
    const double x2 = x * x;
    return 1.0 / x + x / 3.0 - x * x2 / 45.0;
  }
  return 1.0 / std::tanh(x);
}

struct BathSide {
  double A;
  double Omega;
};

BathSide side(const OhmicBathConfig& cfg, int i) {
  if (i == 1) return {cfg.A1, cfg.Omega1};
  if (i == 2) return {cfg.A2, cfg.Omega2};
  throw std::invalid_argument("bath index must be 1 or 2");
}

template <class F>
double integrate_spectral(const F& f, double Omega, double max_frequency,
                          const quad::QuadratureSettings& qs, const char* what) {
  double width = Omega;
  if (max_frequency > 0.0) width = std::min(width, (2.0 * std::numbers::pi / max_frequency) / 8.0);
  const quad::QuadResult r = quad::integrate_adaptive(f, 0.0, kCutoffMultiple * Omega, width,
                                                      qs.abs_tol, qs.rel_tol, qs.max_panels);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " quadrature did not converge: estimate " << r.value << ", error bound "
        << r.error;
    throw quad::QuadratureError(msg.str(), r.value, r.error);
  }
  return r.value;
}

}  // namespace

void OhmicBathConfig::validate() const {
  if (!(A1 >= 0.0) || !(A2 >= 0.0)) throw std::invalid_argument("A_i must be >= 0");
  if (!(Omega1 > 0.0) || !(Omega2 > 0.0)) throw std::invalid_argument("Omega_i must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
}

InteractionClock::InteractionClock(double offset, double on, double off)
    : offset_(offset), on_(on), off_(off) {
  if (!(offset >= 0.0) || !(on >= 0.0) || !(off >= on)) {
    throw std::invalid_argument("interaction clock needs offset >= 0 and 0 <= on <= off");
  }
}

double InteractionClock::operator()(double t) const {
  return offset_ + std::clamp(t - on_, 0.0, off_ - on_);
}

double gamma(const OhmicBathConfig& cfg, const ClockPair& clock, int i, double t,
             const quad::QuadratureSettings& qs) {
  cfg.validate();
  const BathSide s = side(cfg, i);
  const double tau = clock.system(t);
  if (tau == 0.0 || s.A == 0.0) return 0.0;
  const double beta = cfg.beta;
  auto integrand = [&](double w) {
    // 1 - cos(w tau) written as 2 sin^2 to keep precision near w = 0.
    const double half = std::sin(0.5 * w * tau);
    const double x = 2.0 * w / beta;
    if (x == 0.0) return 0.0;
    return s.A * std::exp(-w / s.Omega) * coth(x) * 2.0 * half * half;
  };
  return integrate_spectral(integrand, s.Omega, tau, qs, "Gamma");
}

double xi_phase(const OhmicBathConfig& cfg, const ClockPair& clock, int i, double t,
                const quad::QuadratureSettings& qs) {
  cfg.validate();
  const BathSide s = side(cfg, i);
  const double tau = clock.system(t);
  const double tau_anc = clock.ancilla(t);
  auto integrand = [&](double w) {
    return s.A * std::exp(-w / s.Omega) *
           (2.0 * std::sin(w * (tau - tau_anc)) - 2.0 * std::sin(w * tau) +
            2.0 * std::sin(w * tau_anc));
  };
  const double fastest = std::max({std::abs(tau - tau_anc), tau, tau_anc});
  return integrate_spectral(integrand, s.Omega, fastest, qs, "Xi");
}

BosonFactors eval_boson_factors(const OhmicBathConfig& cfg, const ClockPair& clock1,
                                const ClockPair& clock2,
                                const std::optional<Fig6Overrides>& overrides, double t,
                                const quad::QuadratureSettings& qs) {
  if (!(t >= 0.0)) throw std::invalid_argument("eval_boson_factors: t must be >= 0");
  const double gamma1 = gamma(cfg, clock1, 1, t, qs);
  const double xi1 = xi_phase(cfg, clock1, 1, t, qs);
  double gamma2, xi2;
  if (overrides) {
    gamma2 = overrides->gamma2_const;
    xi2 = overrides->xi2_phase_const;
  } else {
    gamma2 = gamma(cfg, clock2, 2, t, qs);
    xi2 = xi_phase(cfg, clock2, 2, t, qs);
  }
  return {std::abs(std::exp(-gamma1) * std::cos(xi1)),
          std::abs(std::exp(-gamma1 - gamma2) * std::cos(xi1 + xi2))};
}

}  // namespace corrdeph::boson
