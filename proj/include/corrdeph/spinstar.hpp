// spinstar.hpp
// Two spin-star baths in a correlated thermal state.
//
// Bath i has n_i spins sigma_ij = +-1 coupled to qubit i through
// g_ij sigma_ij sigma_iS.  The joint bath Hamiltonian
//
//   H = B1 S1 + B2 S2 + alpha S1 S2,
//   S_i = sum_j sigma_ij / 2 + (J_i / B_i) sum_<mn> sigma_im sigma_in,
//
// is diagonal in the sigma basis, so every decoherence factor is an exact
// thermal average of a phase:
//
//   kappa1   = | < exp(-2i Theta1 m1) > |,      m_i = sum_j g_ij sigma_ij
//   lambda12 = | < exp(-2i (Theta1 m1 + Theta2 m2)) > |
//
// kappa2 and kappa12 (phase difference) follow the same pattern.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "corrdeph/core.hpp"
#include "corrdeph/trace.hpp"

namespace corrdeph::spin {

// Which pairs <mn> the intra-bath term sums over.
enum class PairRule {
  complete,  // all unordered pairs in the bath
  ring,      // nearest neighbours on a closed ring
};

std::string_view pair_rule_name(PairRule r);
PairRule parse_pair_rule(std::string_view name);

inline constexpr int kMaxSpins = 24;

struct SpinStarConfig {
  int n1 = 1;
  int n2 = 1;
  double B1 = 0.0;
  double B2 = 0.0;
  double alpha = 0.0;
  double J1 = 0.0;  // 0 = no self-correlation
  double J2 = 0.0;
  double beta = 0.0;
  // Per-spin system-bath couplings; empty means all 1.
  std::vector<double> g1;
  std::vector<double> g2;
  PairRule pair_rule = PairRule::complete;

  // Throws std::invalid_argument: n_i >= 1, n1 + n2 <= 24, beta >= 0,
  // J_i != 0 requires B_i != 0, coupling lists sized n_i.
  void validate() const;

  double coupling(int bath, int j) const;
  // True when every g_ij within each bath is equal.
  bool uniform_couplings() const;
};

struct ThetaPair {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// spins has n1 + n2 entries of +1/-1, bath 1 first.
double bath_energy(const SpinStarConfig& cfg, std::span<const int> spins);

// Spin k of an enumeration index is +1 when bit k is clear, -1 when set.
std::vector<int> spins_from_index(const SpinStarConfig& cfg, std::uint64_t index);

// Normalized Boltzmann weights for all 2^(n1+n2) assignments, indexed as
// in spins_from_index.
std::vector<double> thermal_weights(const SpinStarConfig& cfg);

// Thermal distribution of the two phase generators (m1, m2).
struct PhaseTable {
  std::vector<double> weight;
  std::vector<double> m1;
  std::vector<double> m2;

  std::size_t size() const { return weight.size(); }
};

enum class Enumeration {
  automatic,  // symmetric when allowed, full otherwise
  full,       // all 2^(n1+n2) assignments
  symmetric,  // binomial degeneracies; complete pair rule and uniform g only
};

PhaseTable build_phase_table(const SpinStarConfig& cfg,
                             Enumeration how = Enumeration::automatic);

DephasingFactors eval_spinstar_factors(const PhaseTable& table, const ThetaPair& th);
DephasingFactors eval_spinstar_factors(const SpinStarConfig& cfg, const ThetaPair& th);

// Theta1(t) = t, Theta2 held at theta2.
FactorTrace run_figure_scan(const SpinStarConfig& cfg, double theta2, const TimeGrid& grid,
                            Enumeration how = Enumeration::automatic);

}  // namespace corrdeph::spin
