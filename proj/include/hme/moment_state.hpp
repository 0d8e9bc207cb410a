#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>

#include "hme/moment_basis.hpp"

namespace hme {

// State vector w of a moment system: density at the zero index, velocity
// at the unit indices, p_ij/(1+delta_ij) at the degree-two indices and
// raw moments f_alpha for 3 <= |alpha| <= M.
class MomentState {
public:
  MomentState(MomentBasis basis, Eigen::VectorXd w)
      : basis_(std::move(basis)), w_(std::move(w)) {
    if (w_.size() != basis_.size())
      throw std::invalid_argument("MomentState: vector length does not match basis");
    if (!(rho() > 0.0)) throw std::domain_error("MomentState: density must be positive");
    if (!(theta() > 0.0)) throw std::domain_error("MomentState: temperature must be positive");
  }

  static MomentState equilibrium(const MomentBasis& basis, double rho, double theta) {
    if (!(rho > 0.0) || !(theta > 0.0))
      throw std::invalid_argument("equilibrium: rho and theta must be positive");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.size());
    w[basis.position_zero()] = rho;
    for (int d = 0; d < basis.dim(); ++d)
      w[basis.position_pair(d, d)] = 0.5 * rho * theta;  // p_dd / (1 + delta)
    return MomentState(basis, std::move(w));
  }

  const MomentBasis& basis() const { return basis_; }
  const Eigen::VectorXd& w() const { return w_; }
  Eigen::VectorXd& w() { return w_; }

  double rho() const { return w_[basis_.position_zero()]; }
  double velocity(int d) const { return w_[basis_.position_unit(d)]; }

  double pressure_entry(int i, int j) const {
    double delta = (i == j) ? 1.0 : 0.0;
    return (1.0 + delta) * w_[basis_.position_pair(i, j)];
  }

  double pressure() const {
    double trace = 0.0;
    for (int d = 0; d < basis_.dim(); ++d) trace += pressure_entry(d, d);
    return trace / basis_.dim();
  }

  double theta() const { return pressure() / rho(); }

private:
  MomentBasis basis_;
  Eigen::VectorXd w_;
};

// Full moment vector f_alpha together with the hydrodynamic fields.
// By construction f_0 = rho, f_{e_i} = 0 and sum_d f_{2 e_d} = 0.
struct MomentDecomposition {
  Eigen::VectorXd f;
  double rho = 0.0, theta = 0.0, p = 0.0;
  std::array<double, 3> u{0.0, 0.0, 0.0};
  Eigen::MatrixXd sigma;  // stress deviator P - p I
};

inline MomentDecomposition state_to_moments(const MomentState& s) {
  const MomentBasis& basis = s.basis();
  const int dim = basis.dim();
  MomentDecomposition out;
  out.rho = s.rho();
  out.p = s.pressure();
  out.theta = s.theta();
  if (!(out.theta > 0.0))
    throw std::domain_error("state_to_moments: temperature must be positive");
  for (int d = 0; d < dim; ++d) out.u[d] = s.velocity(d);
  out.sigma = Eigen::MatrixXd(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out.sigma(i, j) = s.pressure_entry(i, j) - (i == j ? out.p : 0.0);

  out.f = Eigen::VectorXd::Zero(basis.size());
  for (int pos = 0; pos < basis.size(); ++pos) {
    const MultiIndex& a = basis.at(pos);
    switch (a.degree()) {
      case 0:
        out.f[pos] = out.rho;
        break;
      case 1:
        out.f[pos] = 0.0;
        break;
      case 2: {
        int i = -1, j = -1;
        for (int d = 0; d < dim; ++d) {
          if (a[d] >= 1) {
            if (i < 0) i = d;
            j = d;
          }
          if (a[d] == 2) i = j = d;
        }
        double delta = (i == j) ? 1.0 : 0.0;
        out.f[pos] = out.sigma(i, j) / (1.0 + delta);
        break;
      }
      default:
        out.f[pos] = s.w()[pos];
    }
  }
  return out;
}

// Random state near equilibrium: density and temperature of order one,
// stress and higher moments bounded by `amplitude`.
inline MomentState perturbed_equilibrium(const MomentBasis& basis, double rho,
                                         double theta, double amplitude,
                                         std::mt19937_64& rng,
                                         bool zero_velocity = false) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int dim = basis.dim();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.size());
  w[basis.position_zero()] = rho * (1.0 + 0.2 * amplitude * unit(rng));
  for (int d = 0; d < dim; ++d)
    w[basis.position_unit(d)] = zero_velocity ? 0.0 : amplitude * unit(rng);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double delta = (i == j) ? 1.0 : 0.0;
      double p_ij = (i == j ? rho * theta : 0.0) + amplitude * theta * unit(rng);
      w[basis.position_pair(i, j)] = p_ij / (1.0 + delta);
    }
  for (int pos = 0; pos < basis.size(); ++pos)
    if (basis.at(pos).degree() >= 3) w[pos] = amplitude * unit(rng);
  return MomentState(basis, std::move(w));
}

}  // namespace hme
