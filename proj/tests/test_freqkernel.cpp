#include <doctest.h>

#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_dawson.h>

#include "corrdeph/freqkernel.hpp"
#include "corrdeph/trace.hpp"

using namespace corrdeph;
using namespace corrdeph::freq;

namespace {

double first_local_min(const std::vector<double>& v, double dt) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] <= v[i - 1] && v[i] < v[i + 1]) return dt * static_cast<double>(i);
  }
  return -1.0;
}

FactorTrace trace_of(const FrequencyScenario& sc, double dt, double t_max) {
  return sample([&](double t) { return eval_factors(sc, t); }, TimeGrid::span(0.0, dt, t_max));
}

}  // namespace

TEST_CASE("presets are literal transcriptions") {
  const auto eq5 = scenario_preset(Preset::eq5, 1.0);
  CHECK(eq5.w0 == 1.0);
  CHECK(eq5.kernels[0] == KernelPhase{2, 0, 0, 0});
  CHECK(eq5.kernels[1] == KernelPhase{2, 0, 0, 0});
  CHECK(eq5.kernels[3] == KernelPhase{4, 0, 0, 0});
  CHECK(eq5.constant_overrides[2] == 1.0);

  const auto eq7 = scenario_preset("eq7", 0.5);
  CHECK(eq7.w0 == 0.0);
  CHECK(eq7.kernels[0] == KernelPhase{1, 0, 0, 0});
  CHECK(eq7.kernels[1] == KernelPhase{1, 0, 1, 0});
  CHECK(eq7.kernels[2] == KernelPhase{0, 0, 1, 0});
  CHECK(eq7.kernels[3] == KernelPhase{2, 0, 1, 0});

  const auto eq9 = scenario_preset(Preset::eq9, 1.0);
  CHECK(eq9.kernels[3] == KernelPhase{4, 0, 0, 0});
  CHECK(eq9.constant_overrides[2] == 1.0);

  const auto eq10 = scenario_preset(Preset::eq10);
  CHECK(eq10.kernels[0] == KernelPhase{1, 3, 0, 0});
  CHECK(eq10.kernels[1] == KernelPhase{2, 2, 0, 0});
  CHECK(eq10.kernels[2] == KernelPhase{-1, 1, 0, 0});
  CHECK(eq10.kernels[3] == KernelPhase{3, 5, 0, 0});
  CHECK(eq10.shifted_time);

  const auto eq11 = scenario_preset(Preset::eq11);
  CHECK(eq11.kernels[0] == KernelPhase{1, 2, 0, 0});
  CHECK(eq11.kernels[1] == KernelPhase{2, 1, 0, 0});
  CHECK(eq11.kernels[2] == KernelPhase{-1, 1, 0, 0});
  CHECK(eq11.kernels[3] == KernelPhase{5, 3, 0, 0});

  CHECK_THROWS_AS(scenario_preset("eq6"), std::invalid_argument);
  CHECK(preset_name(parse_preset("eq11")) == "eq11");
}

TEST_CASE("unshifted presets start at one") {
  for (const char* name : {"eq5", "eq7", "eq9"}) {
    const auto f = eval_factors(scenario_preset(name, 1.0), 0.0);
    CHECK(std::abs(f.k1 - 1.0) < 1e-10);
    CHECK(std::abs(f.k2 - 1.0) < 1e-10);
    CHECK(std::abs(f.k12 - 1.0) < 1e-10);
    CHECK(std::abs(f.l12 - 1.0) < 1e-10);
    CHECK(initial_coherence_error(scenario_preset(name, 1.0)) < 1e-10);
  }
}

TEST_CASE("Markovian baseline has Gaussian factors") {
  const auto trace = trace_of(scenario_preset(Preset::eq9, 1.0), 1e-2, 3.0);
  const auto k1 = trace.moduli(Factor::kappa1);
  const auto l12 = trace.moduli(Factor::lambda12);
  for (std::size_t i = 0; i < trace.grid.n; ++i) {
    const double t = trace.grid.at(i);
    CHECK(std::abs(k1[i] - std::exp(-t * t)) < 1e-8);
    CHECK(std::abs(l12[i] - std::exp(-4.0 * t * t)) < 1e-8);
    CHECK(trace.samples[i].k12 == cplx{1.0});
    if (i > 0) {
      CHECK(k1[i] < k1[i - 1]);
      // e^{-4t^2} underflows below the representable step size near t = 3.
      if (l12[i - 1] > 1e-12) CHECK(l12[i] < l12[i - 1]);
    }
  }
}

TEST_CASE("M-NM preset: kappa12 is |cos 2gt|") {
  const auto sc = scenario_preset(Preset::eq7, 1.0);
  CHECK(std::abs(eval_factors(sc, std::numbers::pi / 4.0).k12) < 1e-12);
  for (double t = 0.0; t <= 3.0; t += 0.01) {
    CHECK(std::abs(std::abs(eval_factors(sc, t).k12) - std::abs(std::cos(2.0 * t))) < 1e-10);
  }
  const auto half = scenario_preset(Preset::eq7, 0.5);
  CHECK(std::abs(std::abs(eval_factors(half, 1.0).k12) - std::abs(std::cos(1.0))) < 1e-10);
}

TEST_CASE("NM-NM preset: kappa12 is one and Lambda12 dips first") {
  const auto sc = scenario_preset(Preset::eq5, 1.0);
  const auto trace = trace_of(sc, 1e-3, 3.0);
  for (const auto& s : trace.samples) CHECK(s.k12 == cplx{1.0});
  const double l_min = first_local_min(trace.moduli(Factor::lambda12), 1e-3);
  const double k_min = first_local_min(trace.moduli(Factor::kappa1), 1e-3);
  CHECK(l_min == doctest::Approx(0.36).epsilon(0.02 / 0.36));
  CHECK(k_min > l_min);
}

TEST_CASE("M-NM preset: Lambda12 dips before kappa2, kappa1 never") {
  const auto trace = trace_of(scenario_preset(Preset::eq7, 1.0), 1e-3, 3.0);
  const double l_min = first_local_min(trace.moduli(Factor::lambda12), 1e-3);
  const double k2_min = first_local_min(trace.moduli(Factor::kappa2), 1e-3);
  CHECK(l_min > 0.0);
  CHECK(k2_min > l_min);
  CHECK(first_local_min(trace.moduli(Factor::kappa1), 1e-3) < 0.0);
}

TEST_CASE("control presets revive kappa12") {
  for (Preset p : {Preset::eq10, Preset::eq11}) {
    const auto sc = scenario_preset(p);
    double prev = -1.0;
    for (double tp = 0.0; tp <= 1.0 + 1e-12; tp += 1e-3) {
      const double k12 = std::abs(eval_factors(sc, tp).k12);
      CHECK(std::abs(k12 - std::exp(-(1.0 - tp) * (1.0 - tp) / 4.0)) < 1e-8);
      if (tp > 0.0) CHECK(k12 > prev);
      prev = k12;
    }
    CHECK(std::abs(std::abs(eval_factors(sc, 1.0).k12) - 1.0) < 1e-10);
  }
  const double scaled = 500.0 * std::abs(eval_factors(scenario_preset(Preset::eq10), 0.0).l12);
  CHECK(std::abs(scaled - 500.0 * std::exp(-25.0 / 4.0)) < 1e-8);
  CHECK(std::abs(scaled - 0.965) < 1e-3);
}

TEST_CASE("complex modulus adds the sine transform") {
  auto sc = scenario_preset(Preset::eq9, 1.0);
  sc.mode = TransformMode::complex_modulus;
  for (double t : {0.0, 0.4, 1.3, 2.7}) {
    // k1 slope 2t: re = (sqrt(pi)/2) e^{-t^2}, im = F(t).
    const double re = std::sqrt(std::numbers::pi) / 2.0 * std::exp(-t * t);
    const double expected = 2.0 / std::sqrt(std::numbers::pi) * std::hypot(re, gsl_sf_dawson(t));
    CHECK(std::abs(std::abs(eval_factors(sc, t).k1) - expected) < 1e-10);
  }
  CHECK(mode_name(parse_mode("complex_modulus")) == "complex_modulus");
  CHECK_THROWS_AS(parse_mode("sine"), std::invalid_argument);
}

TEST_CASE("negative time is rejected") {
  CHECK_THROWS_AS(eval_factors(scenario_preset(Preset::eq5, 1.0), -0.1), std::invalid_argument);
}

TEST_CASE("coupling schedules") {
  CHECK_THROWS_AS(CouplingSchedule({}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingSchedule({{0.5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingSchedule({{0.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
  const CouplingSchedule s({{0.0, 3.0}, {1.0, 1.0}, {2.0, 0.0}});
  CHECK(s.coupling(0.5) == 3.0);
  CHECK(s.coupling(1.0) == 1.0);
  CHECK(s.coupling(5.0) == 0.0);
  CHECK(s.accumulated_phase(0.0) == 0.0);
  CHECK(s.accumulated_phase(0.5) == doctest::Approx(3.0));
  CHECK(s.accumulated_phase(1.5) == doctest::Approx(7.0));
  CHECK(s.accumulated_phase(4.0) == doctest::Approx(8.0));
  // Continuity at breakpoints.
  CHECK(std::abs(s.accumulated_phase(1.0 - 1e-12) - s.accumulated_phase(1.0)) < 1e-10);
}

TEST_CASE("derived kernels reproduce the NM-NM preset") {
  const auto sc = derive_kernels(0.0, 0.0, CouplingSchedule::constant(1.0),
                                 CouplingSchedule::constant(1.0), 1.0);
  const auto preset = scenario_preset(Preset::eq5, 1.0);
  for (double t = 0.0; t <= 3.0; t += 0.05) {
    const auto a = eval_factors(sc, t);
    const auto b = eval_factors(preset, t);
    CHECK(a.k1 == b.k1);
    CHECK(a.k2 == b.k2);
    CHECK(a.l12 == b.l12);
    CHECK(std::abs(a.k12 - b.k12) < 1e-10);
  }
}

TEST_CASE("derived kernels reproduce the Markovian preset") {
  const auto sc = derive_kernels(0.0, 0.0, CouplingSchedule::constant(1.0),
                                 CouplingSchedule::constant(1.0), 0.0);
  const auto preset = scenario_preset(Preset::eq9, 1.0);
  for (double t = 0.0; t <= 3.0; t += 0.1) {
    const auto a = eval_factors(sc, t);
    const auto b = eval_factors(preset, t);
    CHECK(a.k1 == b.k1);
    CHECK(a.l12 == b.l12);
  }
}

TEST_CASE("equal accumulated phases restore kappa12") {
  // Theta1 = 4t up to t = 1 then frozen; Theta2 = 2t; equal at t = 2.
  const auto sc = derive_kernels(0.0, 0.0, CouplingSchedule({{0.0, 2.0}, {1.0, 0.0}}),
                                 CouplingSchedule::constant(1.0), 0.0);
  CHECK(std::abs(std::abs(eval_factors(sc, 2.0).k12) - 1.0) < 1e-10);
  CHECK(std::abs(eval_factors(sc, 1.0).k12) < 0.9);
}

TEST_CASE("halved couplings reproduce the reduced-coupling preset") {
  // g1: 3 -> 1 at t = 1 and g2 = 2 in the printed convention are 1.5 -> 0.5
  // and 1 under Theta = 2 int g.
  const auto sc = derive_kernels(0.0, 0.0, CouplingSchedule({{0.0, 1.5}, {1.0, 0.5}}),
                                 CouplingSchedule::constant(1.0), 0.0);
  const auto preset = scenario_preset(Preset::eq10);
  for (double tp = 0.0; tp <= 2.0; tp += 0.01) {
    const auto a = eval_factors(sc, 1.0 + tp);
    const auto b = eval_factors(preset, tp);
    for (Factor f : kAllFactors) CHECK(std::abs(std::abs(a.get(f)) - std::abs(b.get(f))) < 1e-10);
  }
}

TEST_CASE("all preset factors stay within [0, 1]") {
  for (const char* name : {"eq5", "eq7", "eq9", "eq10", "eq11"}) {
    const auto sc = scenario_preset(name, 1.0);
    for (double t = 0.0; t <= 3.0; t += 0.01) {
      const auto f = eval_factors(sc, t);
      CHECK(f.max_modulus() <= 1.0 + 1e-9);
    }
  }
}
