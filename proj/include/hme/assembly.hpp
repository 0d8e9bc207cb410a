#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hme/moment_state.hpp"

namespace hme {

// Coefficient matrix D(w) of the quasi-linear form D dw/dt + sum_d M_d D
// dw/dx_d = S. Lower triangular with nonzero diagonal under the grevlex
// ordering.
inline Eigen::MatrixXd assemble_D(const MomentState& s) {
  const MomentBasis& basis = s.basis();
  const int n = basis.size();
  const int dim = basis.dim();
  const MomentDecomposition mom = state_to_moments(s);
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
  for (int row = 0; row < n; ++row) {
    const MultiIndex& a = basis.at(row);
    double trace_shift = 0.0;  // sum_d f_{alpha - 2 e_d}
    for (int d = 0; d < dim; ++d) {
      int below = basis.position(a.shifted(d, -1));
      if (below != MomentBasis::absent)
        D(row, basis.position_unit(d)) += mom.f[below];
      int twice_below = basis.position(a.shifted(d, -2));
      if (twice_below != MomentBasis::absent) trace_shift += mom.f[twice_below];
    }
    D(row, basis.position_zero()) -= 0.5 * mom.theta / mom.rho * trace_shift;
    if (a.degree() >= 3) {
      double c = trace_shift / (dim * mom.rho);
      for (int k = 0; k < dim; ++k) D(row, basis.position_pair(k, k)) += c;
    }
  }
  for (int d = 0; d < dim; ++d) D(basis.position_unit(d), basis.position_unit(d)) -= 1.0;
  return D;
}

// Closed-form inverse of D(w).
inline Eigen::MatrixXd assemble_Dinv(const MomentState& s) {
  const MomentBasis& basis = s.basis();
  const int n = basis.size();
  const int dim = basis.dim();
  const MomentDecomposition mom = state_to_moments(s);
  Eigen::MatrixXd Dinv = Eigen::MatrixXd::Identity(n, n);
  for (int row = 0; row < n; ++row) {
    const MultiIndex& a = basis.at(row);
    double trace_shift = 0.0;
    for (int d = 0; d < dim; ++d) {
      int below = basis.position(a.shifted(d, -1));
      if (below != MomentBasis::absent)
        Dinv(row, basis.position_unit(d)) -= mom.f[below] / mom.rho;
      int twice_below = basis.position(a.shifted(d, -2));
      if (twice_below != MomentBasis::absent) trace_shift += mom.f[twice_below];
    }
    if (a.degree() >= 3) {
      double c = trace_shift / (dim * mom.rho);
      for (int k = 0; k < dim; ++k) Dinv(row, basis.position_pair(k, k)) -= c;
    }
  }
  for (int d = 0; d < dim; ++d) {
    Dinv(basis.position_unit(d), basis.position_unit(d)) += 1.0 / mom.rho;
    Dinv(basis.position_pair(d, d), basis.position_zero()) += 0.5 * mom.theta;
  }
  return Dinv;
}

// Transport matrix M_d; depends on the state only through u_d and theta.
// The top-degree upward coupling is dropped, which is what makes the
// system hyperbolic for every admissible state.
inline Eigen::MatrixXd assemble_M(const MomentState& s, int d) {
  const MomentBasis& basis = s.basis();
  if (d < 0 || d >= basis.dim())
    throw std::invalid_argument("assemble_M: direction out of range");
  const int n = basis.size();
  const double theta = s.theta();
  const double u_d = s.velocity(d);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    const MultiIndex& a = basis.at(row);
    int below = basis.position(a.shifted(d, -1));
    if (below != MomentBasis::absent) M(row, below) = theta;
    M(row, row) = u_d;
    if (a.degree() < basis.order()) {
      int above = basis.position(a.shifted(d, +1));
      M(row, above) = a[d] + 1.0;
    }
  }
  return M;
}

// Characteristic matrix A_d = D^{-1} M_d D; similar to M_d, hence real
// diagonalizable for every admissible state.
inline Eigen::MatrixXd assemble_A(const MomentState& s, int d) {
  return assemble_Dinv(s) * assemble_M(s, d) * assemble_D(s);
}

// Equilibrium (linearized, dimensionless) system at a given density and
// temperature. The same container describes the projected ordered system,
// distinguished by the `system` tag.
struct LinearizedSystem {
  std::string system = "hme";
  int dim = 1;
  int order = 3;
  double rho0 = 1.0, theta0 = 1.0;
  std::vector<MultiIndex> slots;
  int pos_zero = 0;
  std::vector<int> pos_unit;           // velocity slots
  std::vector<int> pos_pressure_diag;  // 2 e_d slots
  Eigen::MatrixXd Dbar, DbarInv;
  Eigen::MatrixXd Deq;                 // D(w_eq), used by the coupling checks
  std::vector<Eigen::MatrixXd> Mbar, Abar;
  Eigen::VectorXd Tdiag;               // symmetrizer, 1/sqrt(alpha!)
  Eigen::VectorXd Lambda0, Lambda1;    // diagonal scalings
  Eigen::VectorXd w0;                  // dimensionless equilibrium state

  int size() const { return static_cast<int>(slots.size()); }
};

inline LinearizedSystem linearize(const MomentBasis& basis, double rho0, double theta0) {
  if (!(rho0 > 0.0) || !(theta0 > 0.0))
    throw std::invalid_argument("linearize: rho0 and theta0 must be positive");
  if (basis.order() < 3)
    throw std::invalid_argument("linearize: moment order must be at least 3");
  const int n = basis.size();
  const int dim = basis.dim();

  LinearizedSystem sys;
  sys.system = "hme";
  sys.dim = dim;
  sys.order = basis.order();
  sys.rho0 = rho0;
  sys.theta0 = theta0;
  sys.slots = basis.indices();
  sys.pos_zero = basis.position_zero();
  for (int d = 0; d < dim; ++d) {
    sys.pos_unit.push_back(basis.position_unit(d));
    sys.pos_pressure_diag.push_back(basis.position_pair(d, d));
  }

  sys.Dbar = Eigen::MatrixXd::Identity(n, n);
  sys.DbarInv = Eigen::MatrixXd::Identity(n, n);
  for (int d = 0; d < dim; ++d) {
    sys.Dbar(sys.pos_pressure_diag[d], sys.pos_zero) -= 0.5;
    sys.DbarInv(sys.pos_pressure_diag[d], sys.pos_zero) += 0.5;
  }

  for (int d = 0; d < dim; ++d) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int row = 0; row < n; ++row) {
      const MultiIndex& a = basis.at(row);
      int below = basis.position(a.shifted(d, -1));
      if (below != MomentBasis::absent) M(row, below) = 1.0;
      if (a.degree() < basis.order())
        M(row, basis.position(a.shifted(d, +1))) = a[d] + 1.0;
    }
    sys.Mbar.push_back(M);
    sys.Abar.push_back(sys.DbarInv * M * sys.Dbar);
  }

  sys.Tdiag = Eigen::VectorXd(n);
  sys.Lambda0 = Eigen::VectorXd(n);
  sys.Lambda1 = Eigen::VectorXd(n);
  sys.w0 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const MultiIndex& a = basis.at(i);
    sys.Tdiag[i] = 1.0 / std::sqrt(multi_factorial(a));
    sys.Lambda1[i] = rho0 * std::pow(theta0, 0.5 * a.degree());
    sys.Lambda0[i] = (a.degree() == 1) ? std::sqrt(theta0) : sys.Lambda1[i];
  }
  sys.w0[sys.pos_zero] = 1.0;
  for (int d = 0; d < dim; ++d) sys.w0[sys.pos_pressure_diag[d]] = 0.5;

  sys.Deq = assemble_D(MomentState::equilibrium(basis, rho0, theta0));
  return sys;
}

// Flux coefficient B_1 of the one-dimensional moment system without the
// hyperbolic regularization: D dw/dt + B_1 dw/dx = S. Differs from M_1 D
// only in the top-degree row, through the velocity column and the theta
// combination (1/rho)(2 dw_{2e_1} - theta dw_0).
inline Eigen::MatrixXd assemble_grad_flux_1d(const MomentState& s) {
  const MomentBasis& basis = s.basis();
  if (basis.dim() != 1)
    throw std::invalid_argument("assemble_grad_flux_1d: one-dimensional systems only");
  const MomentDecomposition mom = state_to_moments(s);
  const int order = basis.order();
  Eigen::MatrixXd B = assemble_M(s, 0) * assemble_D(s);
  MultiIndex top(1);
  top[0] = order;
  const int row = basis.position(top);
  const double f_top = mom.f[basis.position(top)];
  const double f_prev = mom.f[basis.position(top.shifted(0, -1))];
  B(row, basis.position_unit(0)) += (order + 1.0) * f_top;
  B(row, basis.position_zero()) -= 0.5 * (order + 1.0) * f_prev * mom.theta / mom.rho;
  B(row, basis.position_pair(0, 0)) += (order + 1.0) * f_prev / mom.rho;
  return B;
}

}  // namespace hme
