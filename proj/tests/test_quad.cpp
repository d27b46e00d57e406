#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <gsl/gsl_sf_dawson.h>

#include "corrdeph/quad.hpp"
#include "oracles.hpp"

using namespace corrdeph::quad;

namespace {
const double kHalfRootPi = std::sqrt(std::numbers::pi) / 2.0;
}

TEST_CASE("closed-form examples") {
  CHECK(std::abs(integrate_gauss_cos({0.0, 0.0, 0.0}) - kHalfRootPi) < 1e-12);
  CHECK(std::abs(integrate_gauss_cos({0.0, 2.0, 0.0}) - kHalfRootPi * std::exp(-1.0)) < 1e-12);
  CHECK(std::abs(integrate_gauss_cos({0.0, 2.0, 0.0}) - 0.3260247) < 1e-7);
  const double w1 = kHalfRootPi * (1.0 + oracle::cody_erf(1.0));
  CHECK(std::abs(integrate_gauss_cos({1.0, 0.0, 0.0}) - w1) < 1e-11);
  CHECK(std::abs(integrate_gauss_cos({1.0, 0.0, 0.0}) - 1.6330511) < 1e-7);
}

TEST_CASE("Gaussian cosine transform for |P| <= 40") {
  for (double p = -40.0; p <= 40.0; p += 0.25) {
    const double exact = kHalfRootPi * std::exp(-p * p / 4.0);
    CHECK(std::abs(integrate_gauss_cos({0.0, p, 0.0}) - exact) < 1e-10);
  }
}

TEST_CASE("sine transform equals the Dawson function") {
  // int_0^inf exp(-w^2) sin(P w) dw = F(P/2); sin(x) = cos(x - pi/2).
  for (double p : {0.1, 0.7, 1.5, 3.0, 6.0, 12.0, 25.0}) {
    const double got = integrate_gauss_cos({0.0, p, -std::numbers::pi / 2.0});
    CHECK(std::abs(got - gsl_sf_dawson(p / 2.0)) < 1e-10);
  }
}

TEST_CASE("parity under (P, C) -> (-P, -C) is exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pu(-20.0, 20.0), cu(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double p = pu(rng), c = cu(rng);
    for (double w0 : {0.0, 1.0, 2.5}) {
      CHECK(integrate_gauss_cos({w0, p, c}) == integrate_gauss_cos({w0, -p, -c}));
    }
  }
}

TEST_CASE("normalization") {
  CHECK(std::abs(normalization(0.0) - 1.0 / std::sqrt(std::numbers::pi)) < 1e-15);
  CHECK(std::abs(normalization(0.0) - 0.5641896) < 1e-7);
  CHECK(std::abs(normalization(1.0) - 0.3061754) < 1e-7);
  CHECK_THROWS_AS(normalization(-0.1), std::invalid_argument);
  for (double w0 : {0.0, 0.3, 1.0, 2.0, 4.0}) {
    const double z = 1.0 / (std::sqrt(std::numbers::pi) * (1.0 + oracle::cody_erf(w0)));
    CHECK(std::abs(normalization(w0) - z) < 1e-12 * z);
    CHECK(std::abs(normalization(w0) * 2.0 * integrate_gauss_cos({w0, 0.0, 0.0}) - 1.0) <
          1e-11);
  }
}

TEST_CASE("delegated erf agrees with the rational reference") {
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    CHECK(std::abs(std::erf(x) - oracle::cody_erf(x)) < 1e-12);
  }
  CHECK(oracle::cody_erf(0.5) == doctest::Approx(0.5204998778130465).epsilon(1e-15));
}

TEST_CASE("riemann oracle examples") {
  CHECK(std::abs(riemann_oracle({0.0, 0.0, 0.0}, 1000000, 8.0) - kHalfRootPi) < 1e-8);
  CHECK(std::abs(riemann_oracle({0.0, 2.0, 0.0}, 1000000, 8.0) -
                 integrate_gauss_cos({0.0, 2.0, 0.0})) < 1e-8);
  // |Lambda12| of the NM-NM preset changes sign between t = 0.36 and 0.37.
  const double lo = riemann_oracle({1.0, 4.0 * 0.36, 0.0}, 100000, 9.0);
  const double hi = riemann_oracle({1.0, 4.0 * 0.37, 0.0}, 100000, 9.0);
  CHECK(lo * hi < 0.0);
  CHECK(std::abs(lo - integrate_gauss_cos({1.0, 4.0 * 0.36, 0.0})) < 1e-8);
}

TEST_CASE("adaptive quadrature matches the oracle on a random sweep") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> pu(-20.0, 20.0), cu(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double w0 = (i % 2 == 0) ? 0.0 : 1.0;
    const GaussCosIntegrand ig{w0, pu(rng), cu(rng)};
    const double adaptive = integrate_gauss_cos(ig);
    const double midpoint = riemann_oracle(ig, 1000000, w0 + 8.0);
    CHECK(std::abs(adaptive - midpoint) < 1e-8);
  }
}

TEST_CASE("panels resolve the oscillation") {
  // A detailed run should report convergence with a modest panel count even
  // at high frequency.
  const auto r = integrate_gauss_cos_detailed({0.0, 200.0, 0.3});
  CHECK(r.converged);
  CHECK(r.panels >= static_cast<std::size_t>(8.0 * 200.0 * 8.0 / (2.0 * std::numbers::pi)));
  CHECK(std::abs(r.value) < 1e-2);
}

TEST_CASE("settings validation and non-convergence") {
  QuadratureSettings bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate_gauss_cos({0.0, 1.0, 0.0}, bad), std::invalid_argument);
  QuadratureSettings short_range;
  short_range.w_max = 5.0;
  CHECK_THROWS_AS(integrate_gauss_cos({0.0, 1.0, 0.0}, short_range), std::invalid_argument);

  QuadratureSettings starved;
  starved.max_panels = 400;  // about 310 initial panels at P = 30
  starved.abs_tol = 1e-300;
  starved.rel_tol = 1e-300;
  try {
    integrate_gauss_cos({0.0, 30.0, 0.0}, starved);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_bound() > 0.0);
  }
  const auto r = integrate_gauss_cos_detailed({0.0, 30.0, 0.0}, starved);
  CHECK_FALSE(r.converged);
  // A budget below the initial panel count fails without evaluating.
  starved.max_panels = 10;
  const auto none = integrate_gauss_cos_detailed({0.0, 30.0, 0.0}, starved);
  CHECK_FALSE(none.converged);
  CHECK(std::isnan(none.value));
  CHECK_THROWS_AS(integrate_gauss_cos({0.0, 1e12, 0.0}), QuadratureError);
}

TEST_CASE("generic adaptive integrator on a polynomial") {
  const auto r = integrate_adaptive([](double x) { return x * x * x; }, 0.0, 2.0, 0.5, 1e-14,
                                    1e-14, 100);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 4.0) < 1e-13);
  const auto empty = integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 0.5, 1e-12, 1e-12,
                                        10);
  CHECK(empty.value == 0.0);
}
