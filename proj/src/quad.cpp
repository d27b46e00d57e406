#include "corrdeph/quad.hpp"

#include <sstream>

namespace corrdeph::quad {

namespace {

constexpr double kDefaultTruncation = 8.0;
constexpr double kMinTruncation = 7.0;
constexpr double kMaxPanelWidth = 1.0;

double upper_bound(const GaussCosIntegrand& ig, const QuadratureSettings& qs) {
  return qs.w_max.value_or(std::max(ig.w0, 0.0) + kDefaultTruncation);
}

}  // namespace

void validate(const GaussCosIntegrand& ig, const QuadratureSettings& qs) {
  if (!(qs.abs_tol > 0.0) || !(qs.rel_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (!std::isfinite(ig.w0) || !std::isfinite(ig.slope) || !std::isfinite(ig.phase)) {
    throw std::invalid_argument("integrand parameters must be finite");
  }
  if (!(upper_bound(ig, qs) >= ig.w0 + kMinTruncation)) {
    throw std::invalid_argument("w_max must be at least w0 + 7");
  }
}

QuadResult integrate_gauss_cos_detailed(const GaussCosIntegrand& ig,
                                        const QuadratureSettings& qs) {
  validate(ig, qs);
  // cos is even: fold negative slopes so that (P, C) and (-P, -C) take the
  // identical path.
  double slope = ig.slope;
  double phase = ig.phase;
  if (slope < 0.0 || (slope == 0.0 && phase < 0.0)) {
    slope = -slope;
    phase = -phase;
  }
  const double w0 = ig.w0;
  auto integrand = [w0, slope, phase](double w) {
    const double x = w - w0;
    return std::exp(-x * x) * std::cos(slope * w + phase);
  };
  double width = kMaxPanelWidth;
  if (slope > 0.0) width = std::min(width, (2.0 * std::numbers::pi / slope) / 8.0);
  return integrate_adaptive(integrand, 0.0, upper_bound(ig, qs), width, qs.abs_tol,
                            qs.rel_tol, qs.max_panels);
}

double integrate_gauss_cos(const GaussCosIntegrand& ig, const QuadratureSettings& qs) {
  const QuadResult r = integrate_gauss_cos_detailed(ig, qs);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "gauss-cos quadrature did not converge (w0=" << ig.w0 << ", P=" << ig.slope
        << ", C=" << ig.phase << "): estimate " << r.value << ", error bound " << r.error
        << " after " << r.panels << " panels";
    throw QuadratureError(msg.str(), r.value, r.error);
  }
  return r.value;
}

double normalization(double w0) {
  if (!(w0 >= 0.0)) throw std::invalid_argument("normalization: w0 must be >= 0");
  return 1.0 / (std::sqrt(std::numbers::pi) * (1.0 + std::erf(w0)));
}

double riemann_oracle(const GaussCosIntegrand& ig, std::size_t n_points, double w_max) {
  if (n_points == 0) return 0.0;
  const double h = w_max / static_cast<double>(n_points);
  double sum = 0.0;
  double carry = 0.0;  // Kahan compensation
  for (std::size_t k = 0; k < n_points; ++k) {
    const double w = (static_cast<double>(k) + 0.5) * h;
    const double x = w - ig.w0;
    const double term = std::exp(-x * x) * std::cos(ig.slope * w + ig.phase) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum * h;
}

}  // namespace corrdeph::quad
