// quad.hpp
// Half-line Gaussian-envelope oscillatory integrals
//
//     I(w0, P, C) = int_0^inf exp(-(w - w0)^2) cos(P w + C) dw
//
// evaluated by globally adaptive Gauss-Kronrod (7/15) quadrature over
// [0, w_max] with initial panels no wider than an eighth of the
// oscillation period.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrdeph::quad {

struct GaussCosIntegrand {
  double w0 = 0.0;     // envelope center
  double slope = 0.0;  // P, phase slope in w
  double phase = 0.0;  // C, constant phase
};

struct QuadratureSettings {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  // Upper truncation bound; w0 + 8 when unset.
  std::optional<double> w_max;
  std::size_t max_panels = 50000;
};

// Thrown when the subdivision budget runs out before the error estimate
// meets the tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the 7-point rule; its nodes are Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive G7/K15 integration of f over [lo, hi].  Initial panels
// are at most `max_initial_width` wide; the panel with the largest error
// estimate is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * |value|) or `max_panels` is reached.  Used for
// the decoherence integrals in this library, not as a general-purpose
// integrator.
template <class F>
QuadResult integrate_adaptive(const F& f, double lo, double hi, double max_initial_width,
                              double abs_tol, double rel_tol, std::size_t max_panels) {
  if (!(hi > lo)) return {0.0, 0.0, 0, true};
  const double wanted = std::max(1.0, std::ceil((hi - lo) / max_initial_width));
  if (!(wanted <= static_cast<double>(max_panels))) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(),
            0, false};
  }
  const auto initial = static_cast<std::size_t>(wanted);
  const double width = (hi - lo) / static_cast<double>(initial);

  std::priority_queue<detail::Panel> queue;
  std::vector<detail::Panel> settled;
  for (std::size_t i = 0; i < initial; ++i) {
    const double a = lo + width * static_cast<double>(i);
    const double b = (i + 1 == initial) ? hi : lo + width * static_cast<double>(i + 1);
    queue.push(detail::gauss_kronrod_15(f, a, b));
  }

  auto totals = [&] {
    // Deterministic summation order: by left endpoint.
    std::vector<detail::Panel> all = settled;
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.lo < y.lo; });
    double v = 0.0, e = 0.0;
    for (const auto& p : all) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  double value = 0.0, error = 0.0;
  {
    auto [v, e] = totals();
    value = v;
    error = e;
  }
  std::size_t panels = queue.size();
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (panels >= max_panels || queue.empty()) {
      return {value, error, panels, false};
    }
    const detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Cannot split further in floating point.
      settled.push_back(worst);
      continue;
    }
    const detail::Panel left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  auto [v, e] = totals();
  return {v, e, panels, true};
}

// Throws std::invalid_argument for non-positive tolerances or
// w_max < w0 + 7.
void validate(const GaussCosIntegrand& ig, const QuadratureSettings& qs);

// Adaptive evaluation; throws QuadratureError on non-convergence.
double integrate_gauss_cos(const GaussCosIntegrand& ig, const QuadratureSettings& qs = {});

// Same, returning the full result instead of throwing.
QuadResult integrate_gauss_cos_detailed(const GaussCosIntegrand& ig,
                                        const QuadratureSettings& qs = {});

// Z such that 2 Z int_0^inf exp(-(w - w0)^2) dw = 1, i.e.
// 1 / (sqrt(pi) (1 + erf(w0))).  Rejects w0 < 0.
double normalization(double w0);

// Midpoint rule on a uniform n-point grid over [0, w_max].  Independent
// check for integrate_gauss_cos; not called on any production path.
double riemann_oracle(const GaussCosIntegrand& ig, std::size_t n_points, double w_max);

}  // namespace corrdeph::quad
