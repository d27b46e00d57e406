#include "corrdeph/spinstar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace corrdeph::spin {

namespace {

double pair_sum(std::span<const int> s, PairRule rule) {
  const std::size_t n = s.size();
  double total = 0.0;
  switch (rule) {
    case PairRule::complete:
      for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = m + 1; k < n; ++k) total += s[m] * s[k];
      }
      break;
    case PairRule::ring:
      if (n == 2) {
        total = s[0] * s[1];
      } else if (n > 2) {
        for (std::size_t m = 0; m < n; ++m) total += s[m] * s[(m + 1) % n];
      }
      break;
  }
  return total;
}

double collective_spin(std::span<const int> s, double J, double B, PairRule rule) {
  double sz = 0.0;
  for (int x : s) sz += 0.5 * x;
  if (J != 0.0) sz += (J / B) * pair_sum(s, rule);
  return sz;
}

double energy_from_spins(double B1, double B2, double alpha, double s1, double s2) {
  return B1 * s1 + B2 * s2 + alpha * s1 * s2;
}

// exp(-beta (E - E_min)) * multiplicity, normalized in place.
void boltzmann(std::vector<double>& energies_to_weights, const std::vector<double>& multiplicity,
               double beta) {
  const double e_min = *std::min_element(energies_to_weights.begin(), energies_to_weights.end());
  double z = 0.0;
  for (std::size_t k = 0; k < energies_to_weights.size(); ++k) {
    const double m = multiplicity.empty() ? 1.0 : multiplicity[k];
    energies_to_weights[k] = m * std::exp(-beta * (energies_to_weights[k] - e_min));
    z += energies_to_weights[k];
  }
  for (double& w : energies_to_weights) w /= z;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(c);
}

PhaseTable full_table(const SpinStarConfig& cfg) {
  const int n = cfg.n1 + cfg.n2;
  const std::uint64_t count = std::uint64_t{1} << n;
  const std::vector<double> weights = thermal_weights(cfg);
  // Merge assignments sharing the same phase generators.
  std::map<std::pair<double, double>, double> merged;
  std::vector<int> spins(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const int s = ((idx >> k) & 1U) ? -1 : 1;
      if (k < cfg.n1) {
        m1 += cfg.coupling(1, k) * s;
      } else {
        m2 += cfg.coupling(2, k - cfg.n1) * s;
      }
    }
    merged[{m1, m2}] += weights[idx];
  }
  PhaseTable table;
  for (const auto& [key, w] : merged) {
    table.weight.push_back(w);
    table.m1.push_back(key.first);
    table.m2.push_back(key.second);
  }
  return table;
}

// With the complete pair rule the energy depends on each bath only through
// its magnetization, so assignments group by the number of flipped spins.
PhaseTable symmetric_table(const SpinStarConfig& cfg) {
  auto bath_spin = [&](int n, int down, double J, double B) {
    const double mag = static_cast<double>(n - 2 * down);
    double sz = 0.5 * mag;
    if (J != 0.0) sz += (J / B) * 0.5 * (mag * mag - n);
    return sz;
  };
  const double g1 = cfg.coupling(1, 0);
  const double g2 = cfg.coupling(2, 0);
  PhaseTable table;
  std::vector<double> multiplicity;
  for (int k1 = 0; k1 <= cfg.n1; ++k1) {
    const double s1 = bath_spin(cfg.n1, k1, cfg.J1, cfg.B1);
    for (int k2 = 0; k2 <= cfg.n2; ++k2) {
      const double s2 = bath_spin(cfg.n2, k2, cfg.J2, cfg.B2);
      table.weight.push_back(energy_from_spins(cfg.B1, cfg.B2, cfg.alpha, s1, s2));
      multiplicity.push_back(binomial(cfg.n1, k1) * binomial(cfg.n2, k2));
      table.m1.push_back(g1 * static_cast<double>(cfg.n1 - 2 * k1));
      table.m2.push_back(g2 * static_cast<double>(cfg.n2 - 2 * k2));
    }
  }
  boltzmann(table.weight, multiplicity, cfg.beta);
  return table;
}

}  // namespace

std::string_view pair_rule_name(PairRule r) {
  return r == PairRule::complete ? "complete" : "ring";
}

PairRule parse_pair_rule(std::string_view name) {
  if (name == "complete") return PairRule::complete;
  if (name == "ring") return PairRule::ring;
  throw std::invalid_argument("unknown pair rule '" + std::string(name) + "'");
}

void SpinStarConfig::validate() const {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("bath sizes must be >= 1");
  if (n1 + n2 > kMaxSpins) {
    throw std::invalid_argument("n1 + n2 exceeds the exact enumeration budget of " +
                                std::to_string(kMaxSpins));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be >= 0");
  if (J1 != 0.0 && B1 == 0.0) throw std::invalid_argument("J1 != 0 requires B1 != 0 (J/B)");
  if (J2 != 0.0 && B2 == 0.0) throw std::invalid_argument("J2 != 0 requires B2 != 0 (J/B)");
  if (!g1.empty() && static_cast<int>(g1.size()) != n1) {
    throw std::invalid_argument("g1 must list n1 couplings");
  }
  if (!g2.empty() && static_cast<int>(g2.size()) != n2) {
    throw std::invalid_argument("g2 must list n2 couplings");
  }
}

double SpinStarConfig::coupling(int bath, int j) const {
  const auto& g = (bath == 1) ? g1 : g2;
  return g.empty() ? 1.0 : g[static_cast<std::size_t>(j)];
}

bool SpinStarConfig::uniform_couplings() const {
  auto uniform = [](const std::vector<double>& g) {
    return std::all_of(g.begin(), g.end(), [&](double x) { return x == g.front(); });
  };
  return uniform(g1) && uniform(g2);
}

double bath_energy(const SpinStarConfig& cfg, std::span<const int> spins) {
  const auto n1 = static_cast<std::size_t>(cfg.n1);
  const auto n2 = static_cast<std::size_t>(cfg.n2);
  if (spins.size() != n1 + n2) {
    throw std::invalid_argument("spin assignment has " + std::to_string(spins.size()) +
                                " entries, expected " + std::to_string(n1 + n2));
  }
  for (int s : spins) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin values must be +1 or -1");
  }
  const double s1 = collective_spin(spins.first(n1), cfg.J1, cfg.B1, cfg.pair_rule);
  const double s2 = collective_spin(spins.subspan(n1), cfg.J2, cfg.B2, cfg.pair_rule);
  return energy_from_spins(cfg.B1, cfg.B2, cfg.alpha, s1, s2);
}

std::vector<int> spins_from_index(const SpinStarConfig& cfg, std::uint64_t index) {
  const int n = cfg.n1 + cfg.n2;
  std::vector<int> spins(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) spins[static_cast<std::size_t>(k)] = ((index >> k) & 1U) ? -1 : 1;
  return spins;
}

std::vector<double> thermal_weights(const SpinStarConfig& cfg) {
  cfg.validate();
  const std::uint64_t count = std::uint64_t{1} << (cfg.n1 + cfg.n2);
  std::vector<double> w(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    w[idx] = bath_energy(cfg, spins_from_index(cfg, idx));
  }
  boltzmann(w, {}, cfg.beta);
  return w;
}

PhaseTable build_phase_table(const SpinStarConfig& cfg, Enumeration how) {
  cfg.validate();
  const bool symmetric_ok = cfg.pair_rule == PairRule::complete && cfg.uniform_couplings();
  if (how == Enumeration::symmetric && !symmetric_ok) {
    throw std::invalid_argument(
        "symmetric enumeration needs the complete pair rule and uniform couplings");
  }
  if (how == Enumeration::full || !symmetric_ok) return full_table(cfg);
  return symmetric_table(cfg);
}

DephasingFactors eval_spinstar_factors(const PhaseTable& table, const ThetaPair& th) {
  cplx k1{0.0}, k2{0.0}, k12{0.0}, l12{0.0};
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double a = -2.0 * th.theta1 * table.m1[i];
    const double b = -2.0 * th.theta2 * table.m2[i];
    const double w = table.weight[i];
    k1 += w * std::polar(1.0, a);
    k2 += w * std::polar(1.0, b);
    l12 += w * std::polar(1.0, a + b);
    k12 += w * std::polar(1.0, a - b);
  }
  return {std::abs(k1), std::abs(k2), std::abs(k12), std::abs(l12)};
}

DephasingFactors eval_spinstar_factors(const SpinStarConfig& cfg, const ThetaPair& th) {
  return eval_spinstar_factors(build_phase_table(cfg), th);
}

FactorTrace run_figure_scan(const SpinStarConfig& cfg, double theta2, const TimeGrid& grid,
                            Enumeration how) {
  const PhaseTable table = build_phase_table(cfg, how);
  return sample([&](double t) { return eval_spinstar_factors(table, {t, theta2}); }, grid);
}

}  // namespace corrdeph::spin
