#pragma once

#include <Eigen/Dense>

#include "hme/stability.hpp"
#include "hme/yong.hpp"

namespace hme {

// Projection from the full order-M system onto the ordered hierarchy:
// every index of degree <= M-1 is kept, and for each |alpha| = M-2 the D
// top-degree slots alpha + 2 e_d are contracted into a single slot stored
// at alpha + 2 e_1. Slot order is inherited from the full basis after
// deleting the absorbed indices. In one dimension the projection is the
// identity.
struct OhmeProjection {
  MomentBasis full;
  std::vector<MultiIndex> slots;
  Eigen::MatrixXd Pb;  // selector / contraction rows, N_O x N
  Eigen::MatrixXd Pp;  // oblique projector, N_O x N
  Eigen::VectorXd To;  // diagonal symmetrizer of the projected system

  int size() const { return static_cast<int>(slots.size()); }
};

inline OhmeProjection build_projection(const MomentBasis& basis) {
  if (basis.order() < 3)
    throw std::invalid_argument("build_projection: moment order must be at least 3");
  const int dim = basis.dim();
  const int order = basis.order();

  OhmeProjection proj{.full = basis};
  for (const MultiIndex& a : basis.indices()) {
    if (a.degree() <= order - 1)
      proj.slots.push_back(a);
    else if (a[0] >= 2)  // alpha + 2 e_1 for some |alpha| = M - 2
      proj.slots.push_back(a);
  }
  const int n_o = proj.size();
  const int n = basis.size();

  proj.Pb = Eigen::MatrixXd::Zero(n_o, n);
  proj.Pp = Eigen::MatrixXd::Zero(n_o, n);
  proj.To = Eigen::VectorXd(n_o);
  for (int r = 0; r < n_o; ++r) {
    const MultiIndex& a = proj.slots[r];
    if (a.degree() <= order - 1) {
      proj.Pb(r, basis.position(a)) = 1.0;
      proj.Pp(r, basis.position(a)) = 1.0;
      proj.To[r] = 1.0 / std::sqrt(multi_factorial(a));
    } else {
      const MultiIndex base = a.shifted(0, -2);
      double denom = 0.0;
      for (int d = 0; d < dim; ++d) denom += multi_factorial(base.shifted(d, +2));
      for (int d = 0; d < dim; ++d) {
        const MultiIndex member = base.shifted(d, +2);
        proj.Pb(r, basis.position(member)) = 1.0;
        proj.Pp(r, basis.position(member)) = multi_factorial(member) / denom;
      }
      proj.To[r] = 1.0 / std::sqrt(denom);
    }
  }
  return proj;
}

inline Eigen::MatrixXd project_matrix(const OhmeProjection& proj, const Eigen::MatrixXd& X) {
  if (X.rows() != proj.full.size() || X.cols() != proj.full.size())
    throw std::invalid_argument("project_matrix: shape mismatch");
  return proj.Pp * X * proj.Pb.transpose();
}

// Linearized ordered system: the projected equilibrium matrices with the
// projected symmetrizer and scalings. Reuses the common container so the
// stability and coupling checks run unchanged.
inline LinearizedSystem project_system(const LinearizedSystem& sys, const OhmeProjection& proj) {
  if (sys.system != "hme")
    throw std::invalid_argument("project_system: expects the full system");
  if (static_cast<int>(sys.slots.size()) != proj.full.size())
    throw std::invalid_argument("project_system: basis mismatch");
  LinearizedSystem out;
  out.system = "ohme";
  out.dim = sys.dim;
  out.order = sys.order;
  out.rho0 = sys.rho0;
  out.theta0 = sys.theta0;
  out.slots = proj.slots;

  const int n_o = proj.size();
  out.Tdiag = proj.To;
  out.Lambda0 = Eigen::VectorXd(n_o);
  out.Lambda1 = Eigen::VectorXd(n_o);
  out.w0 = Eigen::VectorXd::Zero(n_o);
  for (int r = 0; r < n_o; ++r) {
    const MultiIndex& a = proj.slots[r];
    out.Lambda1[r] = sys.rho0 * std::pow(sys.theta0, 0.5 * a.degree());
    out.Lambda0[r] = (a.degree() == 1) ? std::sqrt(sys.theta0) : out.Lambda1[r];
    if (a.degree() == 0) out.pos_zero = r;
    if (a == MultiIndex::zero(out.dim)) out.w0[r] = 1.0;
  }
  out.pos_unit.resize(out.dim);
  out.pos_pressure_diag.resize(out.dim);
  for (int d = 0; d < out.dim; ++d) {
    MultiIndex unit = MultiIndex::unit(out.dim, d);
    MultiIndex pair = unit.shifted(d, +1);
    for (int r = 0; r < n_o; ++r) {
      if (proj.slots[r] == unit) out.pos_unit[d] = r;
      if (proj.slots[r] == pair) {
        out.pos_pressure_diag[d] = r;
        out.w0[r] = 0.5;
      }
    }
  }

  out.Dbar = project_matrix(proj, sys.Dbar);
  // When top-shell contractions share members (M >= 4 beyond one
  // dimension), Pp Pb^T is not the identity and the projected closed-form
  // inverse is not the inverse of the projected matrix; invert honestly.
  out.DbarInv = out.Dbar.inverse();
  out.Deq = project_matrix(proj, sys.Deq);
  for (int d = 0; d < sys.dim; ++d) {
    out.Mbar.push_back(project_matrix(proj, sys.Mbar[d]));
    out.Abar.push_back(out.DbarInv * out.Mbar[d] * out.Dbar);
  }
  return out;
}

// Nonlinear coefficient matrix of the ordered system at a lifted state:
// D_O(w_O) = Pp D(Pb^T w_O) Pb^T, and likewise for the transport part.
inline Cond2Sample cond2_sample_projected(const OhmeProjection& proj,
                                          const MomentState& lifted) {
  const MomentBasis& basis = lifted.basis();
  const int dim = basis.dim();
  Eigen::MatrixXd D_o = project_matrix(proj, assemble_D(lifted));
  Eigen::PartialPivLU<Eigen::MatrixXd> d_lu(D_o);

  const int n_o = proj.size();
  const double rho = lifted.rho();
  const double theta = lifted.theta();
  Eigen::VectorXd scale(n_o);  // (Lambda_1^O T_O)^{-1}
  for (int r = 0; r < n_o; ++r)
    scale[r] = 1.0 / (rho * std::pow(theta, 0.5 * proj.slots[r].degree()) * proj.To[r]);

  Cond2Sample sample;
  Eigen::MatrixXd factor = scale.asDiagonal() * D_o;
  sample.A0 = factor.transpose() * factor;
  for (int d = 0; d < dim; ++d) {
    Eigen::MatrixXd M_o = project_matrix(proj, assemble_M(lifted, d));
    sample.Ad.push_back(d_lu.solve(M_o * D_o));
  }
  return sample;
}

// Lift an ordered-system state back to the full basis, duplicating each
// contracted value into its member slots.
inline MomentState lift_state(const OhmeProjection& proj, const Eigen::VectorXd& w_o) {
  if (w_o.size() != proj.size())
    throw std::invalid_argument("lift_state: length mismatch");
  return MomentState(proj.full, proj.Pb.transpose() * w_o);
}

struct OhmeCheckReport {
  StabilityReport stability;
  YongReport yong;
  bool pass() const { return stability.pass() && yong.overall; }
};

// Run the full stability + coupling battery on the projected system.
inline OhmeCheckReport run_ohme_checks(const LinearizedSystem& ohme_sys,
                                       const Eigen::MatrixXd& Qbar_o,
                                       const OhmeProjection& proj,
                                       const std::string& model,
                                       const SweepConfig& sweep,
                                       int cond2_states, std::uint64_t seed,
                                       const YongTolerances& tol = {}) {
  OhmeCheckReport report;
  report.stability = run_stability_checks(ohme_sys, Qbar_o, model, sweep);
  std::mt19937_64 rng(seed);
  std::vector<Cond2Sample> samples;
  for (int i = 0; i < cond2_states; ++i) {
    MomentState s = perturbed_equilibrium(proj.full, ohme_sys.rho0, ohme_sys.theta0,
                                          0.05, rng, /*zero_velocity=*/true);
    samples.push_back(cond2_sample_projected(proj, lift_state(proj, proj.Pp * s.w())));
  }
  report.yong = run_yong(ohme_sys, Qbar_o, samples, tol);
  return report;
}

}  // namespace hme
