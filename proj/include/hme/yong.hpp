#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hme/collision.hpp"

namespace hme {

// Relaxation structure of the source Jacobian at equilibrium: the
// conserved rows vanish and the rest is an invertible block, which is
// equivalent to rank Q = N - D - 2 together with rank Q^2 = rank Q.
struct Condition1Report {
  double conserved_row_residual = 0.0;
  bool conserved_rows_zero = false;
  int rank_q = 0;
  int rank_q_squared = 0;
  bool pass = false;
};

namespace detail {

inline int svd_rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  return static_cast<int>((s.array() > rel_tol * s[0]).count());
}

}  // namespace detail

inline Condition1Report check_condition1(const Eigen::MatrixXd& Q,
                                         const LinearizedSystem& sys,
                                         double tol = 1e-10) {
  Condition1Report out;
  double residual = Q.row(sys.pos_zero).cwiseAbs().maxCoeff();
  for (int d = 0; d < sys.dim; ++d)
    residual = std::max(residual, Q.row(sys.pos_unit[d]).cwiseAbs().maxCoeff());
  Eigen::RowVectorXd trace_row = Eigen::RowVectorXd::Zero(sys.size());
  for (int d = 0; d < sys.dim; ++d) trace_row += Q.row(sys.pos_pressure_diag[d]);
  residual = std::max(residual, trace_row.cwiseAbs().maxCoeff());
  out.conserved_row_residual = residual;
  out.conserved_rows_zero = residual <= tol;

  out.rank_q = detail::svd_rank(Q, 1e-10);
  out.rank_q_squared = detail::svd_rank(Q * Q, 1e-10);
  const int expected = sys.size() - sys.dim - 2;
  out.pass = out.conserved_rows_zero && out.rank_q == expected &&
             out.rank_q_squared == out.rank_q;
  return out;
}

// Symmetrizer candidate A_0 = ((Lambda_1 T)^{-1} D(w))^T (Lambda_1 T)^{-1}
// D(w), a Gram matrix of an invertible factor, built in the co-moving
// frame. Lambda_1 uses the state's own density and temperature.
inline Eigen::MatrixXd build_A0(const MomentState& s) {
  const MomentBasis& basis = s.basis();
  for (int d = 0; d < basis.dim(); ++d)
    if (s.velocity(d) != 0.0)
      throw std::invalid_argument("build_A0: requires the co-moving frame u = 0");
  const int n = basis.size();
  const double rho = s.rho();
  const double theta = s.theta();
  Eigen::VectorXd scale(n);  // (Lambda_1 T)^{-1} diagonal
  for (int i = 0; i < n; ++i) {
    const MultiIndex& a = basis.at(i);
    scale[i] = std::sqrt(multi_factorial(a)) /
               (rho * std::pow(theta, 0.5 * a.degree()));
  }
  Eigen::MatrixXd factor = scale.asDiagonal() * assemble_D(s);
  return factor.transpose() * factor;
}

struct Cond2Sample {
  Eigen::MatrixXd A0;
  std::vector<Eigen::MatrixXd> Ad;
};

inline Cond2Sample cond2_sample(const MomentState& s) {
  Cond2Sample sample;
  sample.A0 = build_A0(s);
  for (int d = 0; d < s.basis().dim(); ++d) sample.Ad.push_back(assemble_A(s, d));
  return sample;
}

// A_0 symmetric positive definite with A_0 A_d symmetric, over a set of
// sampled states.
struct Condition2Report {
  double max_sym_residual = 0.0;
  double min_a0_eigenvalue = 0.0;
  bool pass = false;
};

inline Condition2Report check_condition2(std::span<const Cond2Sample> samples,
                                         double tol = 1e-11) {
  Condition2Report out;
  out.min_a0_eigenvalue = std::numeric_limits<double>::infinity();
  for (const Cond2Sample& sample : samples) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (sample.A0 + sample.A0.transpose()));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("check_condition2: eigendecomposition failed");
    out.min_a0_eigenvalue = std::min(out.min_a0_eigenvalue, es.eigenvalues().minCoeff());
    for (const Eigen::MatrixXd& Ad : sample.Ad) {
      Eigen::MatrixXd prod = sample.A0 * Ad;
      out.max_sym_residual = std::max(
          out.max_sym_residual, (prod - prod.transpose()).cwiseAbs().maxCoeff());
    }
  }
  out.pass = out.max_sym_residual <= tol && out.min_a0_eigenvalue > 0.0;
  return out;
}

// Coupling inequality: Sym = A_0 Q + Q^T A_0 is negative semi-definite
// with kernel exactly the conserved subspace, and admits the factorized
// form -P^T diag(0, I) P.
struct Condition3Report {
  double product_sym_residual = 0.0;  // A_0 Q against its transpose
  double identity_residual = 0.0;     // Sym against the scaled symmetrized Jacobian
  double max_eigenvalue = 0.0;
  int kernel_dim = 0;
  bool kernel_match = false;
  double kernel_angle_sin = 0.0;      // largest principal angle, as a sine
  double reconstruction_residual = 0.0;
  bool pass = false;
};

inline Condition3Report check_condition3(const LinearizedSystem& sys,
                                         const Eigen::MatrixXd& Qbar,
                                         double nsd_rel_tol = 1e-10,
                                         double reconstruction_tol = 1e-10,
                                         double kernel_angle_tol = 1e-8) {
  const int n = sys.size();
  const Eigen::MatrixXd Q = unscale_Q(sys, Qbar);

  Eigen::VectorXd scale(n);  // (Lambda_1 T)^{-1} diagonal
  for (int i = 0; i < n; ++i) scale[i] = 1.0 / (sys.Lambda1[i] * sys.Tdiag[i]);
  Eigen::MatrixXd factor = scale.asDiagonal() * sys.Deq;
  Eigen::MatrixXd A0 = factor.transpose() * factor;

  Condition3Report out;
  Eigen::MatrixXd prod = A0 * Q;
  out.product_sym_residual = (prod - prod.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd Sym = prod + prod.transpose();

  // Sym should equal 2 sqrt(theta0) (Lambda_1 T)^{-T} (T^{-1} Qbar T)
  // (Lambda_1 T)^{-1}.
  Eigen::MatrixXd tqt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      tqt(i, j) = Qbar(i, j) * sys.Tdiag[j] / sys.Tdiag[i];
  Eigen::MatrixXd reference = 2.0 * std::sqrt(sys.theta0) *
                              (scale.asDiagonal() * tqt * scale.asDiagonal());
  out.identity_residual = (Sym - reference).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Sym + Sym.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("check_condition3: eigendecomposition failed");
  const Eigen::VectorXd& eig = es.eigenvalues();
  const double eig_scale = eig.cwiseAbs().maxCoeff();
  out.max_eigenvalue = eig.maxCoeff();

  std::vector<int> kernel_cols, negative_cols;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eig[i]) <= 1e-8 * eig_scale)
      kernel_cols.push_back(i);
    else
      negative_cols.push_back(i);
  }
  out.kernel_dim = static_cast<int>(kernel_cols.size());

  // ker(Sym) against ker(Q) by principal angles.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<int> qnull;
  for (int i = 0; i < n; ++i)
    if (sv[i] <= 1e-10 * sv[0]) qnull.push_back(i);
  if (static_cast<int>(qnull.size()) == out.kernel_dim && out.kernel_dim > 0) {
    Eigen::MatrixXd U(n, out.kernel_dim), W(n, out.kernel_dim);
    for (int c = 0; c < out.kernel_dim; ++c) {
      U.col(c) = es.eigenvectors().col(kernel_cols[c]);
      W.col(c) = svd.matrixV().col(qnull[c]);
    }
    Eigen::MatrixXd residual = W - U * (U.transpose() * W);
    out.kernel_angle_sin = residual.norm() == 0.0
                               ? 0.0
                               : residual.jacobiSvd().singularValues()[0];
    out.kernel_match = out.kernel_angle_sin <= kernel_angle_tol;
  }

  // Factorization Sym = -P^T diag(0, I) P: kernel rows enter with unit
  // scale, the rest with sqrt(-eigenvalue).
  Eigen::MatrixXd P(n, n);
  int r = 0;
  for (int c : kernel_cols) P.row(r++) = es.eigenvectors().col(c).transpose();
  std::vector<int> j_rows;
  for (int c : negative_cols) {
    j_rows.push_back(r);
    P.row(r++) = std::sqrt(std::max(0.0, -eig[c])) * es.eigenvectors().col(c).transpose();
  }
  Eigen::MatrixXd JP = Eigen::MatrixXd::Zero(n, n);
  for (int row : j_rows) JP.row(row) = P.row(row);
  out.reconstruction_residual = (Sym + P.transpose() * JP).cwiseAbs().maxCoeff();

  out.pass = out.max_eigenvalue <= nsd_rel_tol * eig_scale &&
             out.kernel_dim == sys.dim + 2 && out.kernel_match &&
             out.reconstruction_residual <= reconstruction_tol;
  return out;
}

struct YongReport {
  Condition1Report cond1;
  Condition2Report cond2;
  Condition3Report cond3;
  // conjugation identity D(w_eq)^{-1} Q D(w_eq) = Q; holds for the full
  // and the projected system alike and gates the verdict
  double dq_identity_residual = 0.0;
  // one-sided forms D(w_eq) Q = Q and Q D(w_eq) = Q; reported only, since
  // overlapping top-shell contractions break them in projected systems
  double dq_onesided_residual = 0.0;
  bool overall = false;
};

struct YongTolerances {
  double conserved_tol = 1e-10;
  double cond2_tol = 1e-11;
  double nsd_rel_tol = 1e-10;
  double reconstruction_tol = 1e-10;
  double kernel_angle_tol = 1e-8;
  double dq_tol = 1e-12;
};

inline YongReport run_yong(const LinearizedSystem& sys, const Eigen::MatrixXd& Qbar,
                           std::span<const Cond2Sample> cond2_samples,
                           const YongTolerances& tol = {}) {
  YongReport report;
  const Eigen::MatrixXd Q = unscale_Q(sys, Qbar);
  report.cond1 = check_condition1(Q, sys, tol.conserved_tol);
  report.cond2 = check_condition2(cond2_samples, tol.cond2_tol);
  report.cond3 = check_condition3(sys, Qbar, tol.nsd_rel_tol, tol.reconstruction_tol,
                                  tol.kernel_angle_tol);
  report.dq_identity_residual =
      (sys.Deq.partialPivLu().solve(Q) * sys.Deq - Q).cwiseAbs().maxCoeff();
  report.dq_onesided_residual =
      std::max((sys.Deq * Q - Q).cwiseAbs().maxCoeff(),
               (Q * sys.Deq - Q).cwiseAbs().maxCoeff());
  report.overall = report.cond1.pass && report.cond2.pass && report.cond3.pass &&
                   report.dq_identity_residual <= tol.dq_tol;
  return report;
}

}  // namespace hme
