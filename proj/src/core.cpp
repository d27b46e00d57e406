#include "corrdeph/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrdeph {

namespace {

// Factor multiplying rho(row, col) for row < col.
Factor upper_factor(int row, int col) {
  static constexpr Factor table[4][4] = {
      {Factor::kappa1, Factor::kappa2, Factor::kappa1, Factor::kappa12},
      {Factor::kappa1, Factor::kappa1, Factor::lambda12, Factor::kappa1},
      {Factor::kappa1, Factor::kappa1, Factor::kappa1, Factor::kappa2},
      {Factor::kappa1, Factor::kappa1, Factor::kappa1, Factor::kappa1},
  };
  return table[row][col];
}

cplx entry_factor(const DephasingFactors& f, int row, int col) {
  if (row == col) return 1.0;
  if (row < col) return f.get(upper_factor(row, col));
  return std::conj(f.get(upper_factor(col, row)));
}

}  // namespace

std::string factor_name(Factor f) {
  switch (f) {
    case Factor::kappa1: return "kappa1";
    case Factor::kappa2: return "kappa2";
    case Factor::kappa12: return "kappa12";
    case Factor::lambda12: return "lambda12";
  }
  return "?";
}

cplx DephasingFactors::get(Factor f) const {
  switch (f) {
    case Factor::kappa1: return k1;
    case Factor::kappa2: return k2;
    case Factor::kappa12: return k12;
    case Factor::lambda12: return l12;
  }
  throw std::logic_error("unknown factor");
}

cplx& DephasingFactors::get(Factor f) {
  switch (f) {
    case Factor::kappa1: return k1;
    case Factor::kappa2: return k2;
    case Factor::kappa12: return k12;
    case Factor::lambda12: return l12;
  }
  throw std::logic_error("unknown factor");
}

double DephasingFactors::max_modulus() const {
  return std::max({std::abs(k1), std::abs(k2), std::abs(k12), std::abs(l12)});
}

DephasingFactors operator*(const DephasingFactors& f, const DephasingFactors& g) {
  return {f.k1 * g.k1, f.k2 * g.k2, f.k12 * g.k12, f.l12 * g.l12};
}

void require_contractive(const DephasingFactors& f) {
  for (Factor which : kAllFactors) {
    const double m = std::abs(f.get(which));
    if (!(m <= 1.0 + kContractiveTolerance)) {
      throw std::invalid_argument("dephasing factor " + factor_name(which) +
                                  " has modulus " + std::to_string(m) + " > 1");
    }
  }
}

TwoQubitPureState::TwoQubitPureState(cplx a, cplx b, cplx c, cplx d) : amp_{a, b, c, d} {
  double norm = 0.0;
  for (const auto& x : amp_) norm += std::norm(x);
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw std::invalid_argument("two-qubit state is not normalized (norm^2 = " +
                                std::to_string(norm) + ")");
  }
}

TwoQubitPureState TwoQubitPureState::product(cplx alpha1, cplx beta1, cplx alpha2,
                                             cplx beta2) {
  return {alpha1 * alpha2, alpha1 * beta2, beta1 * alpha2, beta1 * beta2};
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::projector(const TwoQubitPureState& s) {
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = s.amplitudes()[static_cast<std::size_t>(i)];
  return TwoQubitDensityMatrix(v * v.adjoint());
}

double TwoQubitDensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double TwoQubitDensityMatrix::trace_error() const { return std::abs(m_.trace() - 1.0); }

double TwoQubitDensityMatrix::min_eigenvalue() const {
  // Symmetrize so the solver only ever sees a Hermitian input.
  const Eigen::Matrix4cd h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool TwoQubitDensityMatrix::is_physical() const {
  return hermiticity_error() <= kNormTolerance && trace_error() <= kNormTolerance &&
         min_eigenvalue() >= -kPositivityTolerance;
}

MapOutcome apply_dephasing_map(const TwoQubitDensityMatrix& rho, const DephasingFactors& f) {
  require_contractive(f);
  Eigen::Matrix4cd out = rho.matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) *= entry_factor(f, i, j);
  }
  TwoQubitDensityMatrix mapped(out);
  const double lambda_min = mapped.min_eigenvalue();
  return {std::move(mapped), lambda_min};
}

MapOutcome apply_dephasing_map(const TwoQubitPureState& state, const DephasingFactors& f) {
  return apply_dephasing_map(TwoQubitDensityMatrix::projector(state), f);
}

QubitState::QubitState(double a, cplx b) : a_(a), b_(b) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::invalid_argument("qubit population outside [0, 1]");
  }
  if (!(std::norm(b) <= a * (1.0 - a) + kNormTolerance)) {
    throw std::invalid_argument("qubit coherence violates |b|^2 <= a(1-a)");
  }
}

Eigen::Matrix2cd QubitState::matrix() const {
  Eigen::Matrix2cd m;
  m << a_, std::conj(b_), b_, 1.0 - a_;
  return m;
}

QubitState dephase_qubit(const QubitState& s, cplx gamma) {
  if (!(std::abs(gamma) <= 1.0 + kContractiveTolerance)) {
    throw std::invalid_argument("single-qubit dephasing factor has modulus > 1");
  }
  return QubitState(s.a(), s.b() * std::conj(gamma));
}

std::pair<QubitState, QubitState> reduced_states(const TwoQubitDensityMatrix& rho) {
  if (!rho.is_physical()) {
    throw std::domain_error("reduced_states: input density matrix is not physical");
  }
  const auto& m = rho.matrix();
  // Qubit 1: trace over qubit 2 (index bit 0).
  const double a1 = std::clamp((m(0, 0) + m(1, 1)).real(), 0.0, 1.0);
  const cplx lower1 = m(2, 0) + m(3, 1);
  // Qubit 2: trace over qubit 1 (index bit 1).
  const double a2 = std::clamp((m(0, 0) + m(2, 2)).real(), 0.0, 1.0);
  const cplx lower2 = m(1, 0) + m(3, 2);
  return {QubitState(a1, lower1), QubitState(a2, lower2)};
}

}  // namespace corrdeph
