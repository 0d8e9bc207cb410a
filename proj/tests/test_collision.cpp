#include <catch2/catch_amalgamated.hpp>

#include "hme/collision.hpp"

using hme::CollisionKind;
using hme::CollisionModel;
using hme::MomentBasis;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// multiset of eigenvalues of the symmetrized Jacobian, ascending
Eigen::VectorXd jacobian_spectrum(const Eigen::MatrixXd& Qbar, const MomentBasis& basis) {
  const int n = basis.size();
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = 1.0 / std::sqrt(hme::multi_factorial(basis.at(i)));
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = Qbar(i, j) * t[j] / t[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  REQUIRE(es.info() == Eigen::Success);
  return es.eigenvalues();
}

void check_conserved_rows(const Eigen::MatrixXd& Q, const MomentBasis& basis, double tol) {
  REQUIRE(Q.row(basis.position_zero()).cwiseAbs().maxCoeff() <= tol);
  for (int d = 0; d < basis.dim(); ++d)
    REQUIRE(Q.row(basis.position_unit(d)).cwiseAbs().maxCoeff() <= tol);
  Eigen::RowVectorXd trace = Eigen::RowVectorXd::Zero(basis.size());
  for (int d = 0; d < basis.dim(); ++d) trace += Q.row(basis.position_pair(d, d));
  REQUIRE(trace.cwiseAbs().maxCoeff() <= tol);
}

void check_dqd_identities(const Eigen::MatrixXd& Qbar, const hme::LinearizedSystem& sys,
                          double tol) {
  REQUIRE(max_abs(sys.DbarInv * Qbar * sys.Dbar - Qbar) <= tol);
  REQUIRE(max_abs(Qbar * sys.DbarInv - Qbar) <= tol);
  REQUIRE(max_abs(sys.Dbar * Qbar - Qbar) <= tol);
}

}  // namespace

TEST_CASE("bgk jacobian in one dimension") {
  MomentBasis basis(1, 3);
  auto result = hme::qbar_bgk(basis, 1.0);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(3, 3) = -1.0;
  REQUIRE(max_abs(result.Qbar - expected) == 0.0);
  REQUIRE(result.kernel_dim == 3);
  REQUIRE(result.symmetry_residual == 0.0);
}

TEST_CASE("bgk eigenvalue multiset") {
  MomentBasis basis(2, 4);
  const double tau = 0.7;
  auto result = hme::qbar_bgk(basis, tau);
  check_conserved_rows(result.Qbar, basis, 0.0);
  auto eig = jacobian_spectrum(result.Qbar, basis);
  const int n = basis.size();
  for (int i = 0; i < n - 4; ++i) REQUIRE(eig[i] == Catch::Approx(-1.0 / tau));
  for (int i = n - 4; i < n; ++i) REQUIRE(std::abs(eig[i]) < 1e-14);
  REQUIRE(result.kernel_dim == 4);  // D + 2
}

TEST_CASE("shakhov jacobian") {
  MomentBasis basis(1, 3);
  auto result = hme::qbar_shakhov(basis, 1.0, 2.0 / 3.0);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(3, 3) = -2.0 / 3.0;  // heat flux relaxes at Pr/tau
  REQUIRE(max_abs(result.Qbar - expected) < 1e-15);

  // Pr = 1 collapses onto the BGK Jacobian
  for (int dim = 1; dim <= 2; ++dim) {
    MomentBasis b(dim, 4);
    REQUIRE(max_abs(hme::qbar_shakhov(b, 0.9, 1.0).Qbar - hme::qbar_bgk(b, 0.9).Qbar) ==
            0.0);
  }

  MomentBasis b2(2, 4);
  auto r2 = hme::qbar_shakhov(b2, 1.0, 2.0 / 3.0);
  REQUIRE(r2.kernel_dim == 4);
  REQUIRE(r2.symmetry_residual <= 1e-15);
  REQUIRE(r2.max_eigenvalue <= 1e-14);
}

TEST_CASE("es-bgk jacobian by recursion and closed form") {
  // Pr = 1: the anisotropic Gaussian degenerates and both BGK limits hold
  for (int dim = 1; dim <= 2; ++dim) {
    MomentBasis b(dim, 4);
    auto es = hme::qbar_esbgk(b, 1.3, 1.0);
    REQUIRE(max_abs(es.recursion.Qbar - hme::qbar_bgk(b, 1.3).Qbar) < 1e-15);
  }

  MomentBasis basis(1, 3);
  const double pr = 2.0 / 3.0;
  auto es = hme::qbar_esbgk(basis, 1.0, pr);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(3, 3) = -pr;
  REQUIRE(max_abs(es.recursion.Qbar - expected) < 1e-15);
  REQUIRE(es.recursion.Qbar(2, 2) == 0.0);  // no stress deviator in 1-D
  REQUIRE(es.closed_form_discrepancy < 1e-15);  // forms agree in 1-D

  // in 2-D the mixed stress slot relaxes at 1/tau under the recursion but
  // not under the displayed closed form
  MomentBasis b2(2, 3);
  const double tau = 2.0;
  auto es2 = hme::qbar_esbgk(b2, tau, pr);
  int mixed = b2.position_pair(0, 1);
  REQUIRE(es2.recursion.Qbar(mixed, mixed) == Catch::Approx(-1.0 / tau));
  REQUIRE(es2.closed_form(mixed, mixed) == 0.0);
  REQUIRE(es2.closed_form_discrepancy == Catch::Approx(1.0 / tau));
  REQUIRE(es2.recursion.kernel_dim == 4);
  REQUIRE(es2.recursion.symmetry_residual <= 1e-15);
  REQUIRE(es2.recursion.max_eigenvalue <= 1e-14);
}

TEST_CASE("closed-form jacobians across the grid") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int order = 3; order <= (dim == 3 ? 5 : 6); ++order) {
      MomentBasis basis(dim, order);
      auto sys = hme::linearize(basis, 1.0, 1.0);
      const double tau = 0.8;
      Eigen::MatrixXd jacobians[] = {
          hme::qbar_bgk(basis, tau).Qbar,
          hme::qbar_shakhov(basis, tau, 2.0 / 3.0).Qbar,
          hme::qbar_esbgk(basis, tau, 2.0 / 3.0).recursion.Qbar};
      for (const auto& qbar : jacobians) {
        auto stats = hme::analyze_jacobian(qbar, sys.Tdiag);
        REQUIRE(stats.symmetry_residual <= 1e-12);
        REQUIRE(stats.max_eigenvalue <= 1e-10 / tau);
        REQUIRE(stats.kernel_dim == dim + 2);
        check_conserved_rows(qbar, basis, 1e-15);
        check_dqd_identities(qbar, sys, 1e-12);
      }
    }
}

TEST_CASE("binary collision jacobian", "[binary]") {
  MomentBasis basis(2, 3);
  CollisionModel model;
  model.kind = CollisionKind::binary;
  model.kernel_b0 = 1.0;
  model.quad_velocity = 16;
  model.quad_angle = 16;
  auto result = hme::qbar_binary(basis, model);
  REQUIRE(result.symmetry_residual <= 1e-6);
  REQUIRE(result.max_eigenvalue <= 1e-6);
  REQUIRE(result.kernel_dim == 4);
  check_conserved_rows(result.Qbar, basis, 1e-6);

  auto sys = hme::linearize(basis, 1.0, 1.0);
  check_dqd_identities(result.Qbar, sys, 1e-6);

  // parameter validation
  MomentBasis b1(1, 3);
  REQUIRE_THROWS_AS(hme::qbar_binary(b1, model), std::invalid_argument);
  MomentBasis b5(2, 5);
  REQUIRE_THROWS_AS(hme::qbar_binary(b5, model), std::invalid_argument);
  CollisionModel coarse = model;
  coarse.quad_velocity = 4;
  REQUIRE_THROWS_AS(hme::qbar_binary(basis, coarse), std::invalid_argument);
}

TEST_CASE("unscaling the jacobian") {
  MomentBasis basis(1, 3);
  auto sys_unit = hme::linearize(basis, 1.0, 1.0);
  Eigen::MatrixXd qbar = hme::qbar_bgk(basis, 1.0).Qbar;
  REQUIRE(max_abs(hme::unscale_Q(sys_unit, qbar) - qbar) == 0.0);

  auto sys = hme::linearize(basis, 2.0, 1.7);
  Eigen::MatrixXd Q = hme::unscale_Q(sys, qbar);
  // kernel transported by the scaling
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v[0] = 1.0;
  REQUIRE((Q * (sys.Lambda1.asDiagonal() * v)).cwiseAbs().maxCoeff() < 1e-14);
  // equilibrium coefficient matrix fixes Q on both sides
  REQUIRE(max_abs(sys.Deq * Q - Q) <= 1e-12);
  REQUIRE(max_abs(Q * sys.Deq - Q) <= 1e-12);
}
