// core.hpp
// Two-qubit and single-qubit dephasing-map algebra.
//
// Basis order is |00>, |01>, |10>, |11>, with the first label belonging to
// qubit 1.  Row/column index of |q1 q2> is 2*q1 + q2.  Under a local
// dephasing process the populations never change; each coherence
// rho(i, j), i < j, is multiplied by one of four decoherence factors:
//
//            |00>    |01>    |10>    |11>
//   |00>      .      k2      k1      k12
//   |01>              .      l12     k1
//   |10>                      .      k2
//   |11>                              .
//
// and the lower triangle by the complex conjugates.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace corrdeph {

using cplx = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kContractiveTolerance = 1e-9;
inline constexpr double kPositivityTolerance = 1e-9;

enum class Factor { kappa1, kappa2, kappa12, lambda12 };

inline constexpr std::array<Factor, 4> kAllFactors = {Factor::kappa1, Factor::kappa2,
                                                      Factor::kappa12, Factor::lambda12};

// Column name used in CSV files and reports.
std::string factor_name(Factor f);

struct DephasingFactors {
  cplx k1{1.0};
  cplx k2{1.0};
  cplx k12{1.0};
  cplx l12{1.0};

  cplx get(Factor f) const;
  cplx& get(Factor f);

  // Largest modulus among the four factors.
  double max_modulus() const;

  friend bool operator==(const DephasingFactors&, const DephasingFactors&) = default;
};

// Entrywise product: the map for f followed by the map for g.
DephasingFactors operator*(const DephasingFactors& f, const DephasingFactors& g);

// Throws std::invalid_argument if any modulus exceeds 1 + kContractiveTolerance.
void require_contractive(const DephasingFactors& f);

class TwoQubitPureState {
public:
  // Throws std::invalid_argument unless |a|^2+|b|^2+|c|^2+|d|^2 = 1 within 1e-12.
  TwoQubitPureState(cplx a, cplx b, cplx c, cplx d);

  cplx a() const { return amp_[0]; }
  cplx b() const { return amp_[1]; }
  cplx c() const { return amp_[2]; }
  cplx d() const { return amp_[3]; }
  const std::array<cplx, 4>& amplitudes() const { return amp_; }

  // Product state |psi1> (x) |psi2> from single-qubit amplitudes.
  static TwoQubitPureState product(cplx alpha1, cplx beta1, cplx alpha2, cplx beta2);

private:
  std::array<cplx, 4> amp_;
};

class TwoQubitDensityMatrix {
public:
  TwoQubitDensityMatrix() = default;
  explicit TwoQubitDensityMatrix(const Eigen::Matrix4cd& m) : m_(m) {}

  static TwoQubitDensityMatrix projector(const TwoQubitPureState& s);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  double hermiticity_error() const;
  double trace_error() const;
  double min_eigenvalue() const;

  // Hermitian and unit trace within 1e-12, smallest eigenvalue >= -1e-9.
  bool is_physical() const;

private:
  Eigen::Matrix4cd m_ = Eigen::Matrix4cd::Zero();
};

// Result of applying a dephasing map.  An unphysical factor combination is
// not an error: the caller gets the matrix and the smallest eigenvalue and
// decides what to do with it.
struct MapOutcome {
  TwoQubitDensityMatrix rho;
  double min_eigenvalue = 0.0;

  bool physical() const { return min_eigenvalue >= -kPositivityTolerance; }
};

MapOutcome apply_dephasing_map(const TwoQubitPureState& state, const DephasingFactors& f);
MapOutcome apply_dephasing_map(const TwoQubitDensityMatrix& rho, const DephasingFactors& f);

// Single-qubit state [[a, conj(b)], [b, 1 - a]].  `b` is the lower-left
// entry; the upper-right entry is conj(b).
class QubitState {
public:
  // Throws std::invalid_argument unless a in [0, 1] and |b|^2 <= a(1-a) + 1e-12.
  QubitState(double a, cplx b);

  double a() const { return a_; }
  double d() const { return 1.0 - a_; }
  cplx b() const { return b_; }
  cplx upper() const { return std::conj(b_); }
  Eigen::Matrix2cd matrix() const;

private:
  double a_;
  cplx b_;
};

// Coherence b -> b * conj(gamma); the upper entry picks up gamma itself.
QubitState dephase_qubit(const QubitState& s, cplx gamma);

// Partial traces.  Throws std::domain_error if rho is not physical.
std::pair<QubitState, QubitState> reduced_states(const TwoQubitDensityMatrix& rho);

}  // namespace corrdeph
