#include <catch2/catch_amalgamated.hpp>

#include "hme/yong.hpp"

using hme::MomentBasis;
using hme::MomentState;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("condition 1 rank characterization") {
  MomentBasis basis(1, 3);
  auto sys = hme::linearize(basis, 1.0, 1.0);
  Eigen::MatrixXd qbar = hme::qbar_bgk(basis, 1.0).Qbar;
  auto report = hme::check_condition1(hme::unscale_Q(sys, qbar), sys);
  REQUIRE(report.conserved_rows_zero);
  REQUIRE(report.rank_q == basis.size() - 3);
  REQUIRE(report.rank_q_squared == report.rank_q);
  REQUIRE(report.pass);

  // a vanishing source signals a degenerate model
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  REQUIRE_FALSE(hme::check_condition1(zero, sys).pass);

  MomentBasis b2(2, 4);
  auto sys2 = hme::linearize(b2, 1.0, 1.0);
  Eigen::MatrixXd q2 = hme::qbar_shakhov(b2, 1.0, 2.0 / 3.0).Qbar;
  auto report2 = hme::check_condition1(hme::unscale_Q(sys2, q2), sys2);
  REQUIRE(report2.pass);
  REQUIRE(report2.rank_q == b2.size() - 4);
}

TEST_CASE("symmetrizer candidate at the unit equilibrium") {
  MomentBasis basis(1, 3);
  auto eq = MomentState::equilibrium(basis, 1.0, 1.0);
  Eigen::MatrixXd a0 = hme::build_A0(eq);
  Eigen::MatrixXd expected{{1.5, 0.0, -1.0, 0.0},
                           {0.0, 1.0, 0.0, 0.0},
                           {-1.0, 0.0, 2.0, 0.0},
                           {0.0, 0.0, 0.0, 6.0}};
  REQUIRE(max_abs(a0 - expected) < 1e-14);

  Eigen::VectorXd w = eq.w();
  w[basis.position_unit(0)] = 0.3;
  REQUIRE_THROWS_AS(hme::build_A0(MomentState(basis, w)), std::invalid_argument);
}

TEST_CASE("condition 2 at random co-moving states") {
  std::mt19937_64 rng(99);
  for (int dim = 1; dim <= 3; ++dim) {
    MomentBasis basis(dim, dim == 3 ? 4 : 5);
    std::vector<hme::Cond2Sample> samples;
    for (int i = 0; i < 8; ++i)
      samples.push_back(hme::cond2_sample(
          hme::perturbed_equilibrium(basis, 1.0, 1.0, 0.1, rng, true)));
    auto report = hme::check_condition2(samples, 1e-11);
    REQUIRE(report.pass);
    REQUIRE(report.min_a0_eigenvalue > 0.0);
    REQUIRE(report.max_sym_residual <= 1e-11);
  }
}

TEST_CASE("condition 3 coupling inequality") {
  MomentBasis basis(1, 3);
  auto sys = hme::linearize(basis, 1.0, 1.0);
  Eigen::MatrixXd qbar = hme::qbar_bgk(basis, 1.0).Qbar;
  auto report = hme::check_condition3(sys, qbar);
  REQUIRE(report.kernel_dim == 3);  // D + 2
  REQUIRE(report.max_eigenvalue <= 1e-12);
  REQUIRE(report.kernel_match);
  REQUIRE(report.identity_residual <= 1e-11);
  REQUIRE(report.reconstruction_residual <= 1e-10);
  REQUIRE(report.pass);
}

TEST_CASE("condition 3 for every closed-form model at order 3 in 2-D") {
  MomentBasis basis(2, 3);
  auto sys = hme::linearize(basis, 1.0, 1.0);
  Eigen::MatrixXd jacobians[] = {
      hme::qbar_bgk(basis, 1.0).Qbar,
      hme::qbar_shakhov(basis, 1.0, 2.0 / 3.0).Qbar,
      hme::qbar_esbgk(basis, 1.0, 2.0 / 3.0).recursion.Qbar};
  for (const auto& qbar : jacobians) {
    auto report = hme::check_condition3(sys, qbar);
    REQUIRE(report.kernel_dim == 4);
    REQUIRE(report.reconstruction_residual <= 1e-10);
    REQUIRE(report.pass);
  }
}

TEST_CASE("full verdict across models and scalings") {
  std::mt19937_64 rng(2024);
  for (double rho0 : {1.0, 2.0})
    for (double theta0 : {1.0, 0.7}) {
      MomentBasis basis(2, 4);
      auto sys = hme::linearize(basis, rho0, theta0);
      Eigen::MatrixXd qbar = hme::qbar_shakhov(basis, 1.0, 2.0 / 3.0).Qbar;
      std::vector<hme::Cond2Sample> samples;
      for (int i = 0; i < 5; ++i)
        samples.push_back(hme::cond2_sample(
            hme::perturbed_equilibrium(basis, rho0, theta0, 0.08, rng, true)));
      auto report = hme::run_yong(sys, qbar, samples);
      REQUIRE(report.cond1.pass);
      REQUIRE(report.cond2.pass);
      REQUIRE(report.cond3.pass);
      REQUIRE(report.dq_identity_residual <= 1e-12);
      REQUIRE(report.dq_onesided_residual <= 1e-12);  // D(w_eq) Q = Q = Q D(w_eq)
      REQUIRE(report.overall);
    }
}
