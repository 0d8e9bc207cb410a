#include <catch2/catch_amalgamated.hpp>

#include "hme/ohme.hpp"

using hme::MomentBasis;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("ordered slot counts") {
  int expected[] = {13, 26, 45};  // D = 3, M = 3, 4, 5
  for (int order = 3; order <= 5; ++order) {
    MomentBasis basis(3, order);
    auto proj = hme::build_projection(basis);
    REQUIRE(proj.size() == expected[order - 3]);
  }
  // D = 2, M = 3: all of degree <= 2 plus one contraction per degree-1 index
  MomentBasis b2(2, 3);
  REQUIRE(hme::build_projection(b2).size() == 8);
}

TEST_CASE("projection rows are independent") {
  MomentBasis basis(2, 4);
  auto proj = hme::build_projection(basis);
  Eigen::MatrixXd gram = proj.Pb * proj.Pb.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  REQUIRE(lu.isInvertible());

  // with disjoint contraction members (M = 3) the projector pair is a
  // one-sided inverse; overlapping members at M >= 4 couple the
  // contracted slots
  MomentBasis b3(2, 3);
  auto proj3 = hme::build_projection(b3);
  REQUIRE(max_abs(proj3.Pp * proj3.Pb.transpose() -
                  Eigen::MatrixXd::Identity(proj3.size(), proj3.size())) < 1e-14);
  Eigen::MatrixXd coupling = proj.Pp * proj.Pb.transpose();
  for (int r = 0; r < proj.size(); ++r)
    if (proj.slots[r].degree() <= basis.order() - 1) {
      REQUIRE(coupling(r, r) == 1.0);
      REQUIRE(coupling.row(r).cwiseAbs().sum() == 1.0);
    }
}

TEST_CASE("one-dimensional projection is the identity") {
  for (int order : {3, 4, 5}) {
    MomentBasis basis(1, order);
    auto proj = hme::build_projection(basis);
    REQUIRE(proj.size() == basis.size());
    REQUIRE(proj.Pb == Eigen::MatrixXd::Identity(basis.size(), basis.size()));
    REQUIRE(proj.Pp == Eigen::MatrixXd::Identity(basis.size(), basis.size()));

    auto sys = hme::linearize(basis, 1.0, 1.0);
    auto osys = hme::project_system(sys, proj);
    // the projected system is the original, bit for bit
    REQUIRE(osys.Dbar == sys.Dbar);
    REQUIRE(osys.DbarInv == sys.DbarInv);
    REQUIRE(osys.Deq == sys.Deq);
    REQUIRE(osys.Mbar[0] == sys.Mbar[0]);
    REQUIRE(osys.Abar[0] == sys.Abar[0]);
    REQUIRE(osys.Tdiag == sys.Tdiag);
    REQUIRE(osys.Lambda1 == sys.Lambda1);

    Eigen::MatrixXd qbar = hme::qbar_bgk(basis, 1.0).Qbar;
    REQUIRE(hme::project_matrix(proj, qbar) == qbar);
  }
}

TEST_CASE("projected symmetrizer works") {
  for (int order : {3, 4, 5}) {
    MomentBasis basis(2, order);
    auto proj = hme::build_projection(basis);
    auto sys = hme::linearize(basis, 1.0, 1.0);
    auto osys = hme::project_system(sys, proj);
    for (int d = 0; d < 2; ++d) {
      Eigen::MatrixXd sym = osys.Tdiag.cwiseInverse().asDiagonal() * osys.Mbar[d] *
                            Eigen::MatrixXd(osys.Tdiag.asDiagonal());
      REQUIRE(max_abs(sym - sym.transpose()) <= 1e-12);
    }
  }
}

TEST_CASE("projected collision jacobians stay dissipative") {
  for (int order : {3, 4}) {
    MomentBasis basis(2, order);
    auto proj = hme::build_projection(basis);
    auto sys = hme::linearize(basis, 1.0, 1.0);
    auto osys = hme::project_system(sys, proj);
    Eigen::MatrixXd jacobians[] = {
        hme::qbar_bgk(basis, 1.0).Qbar,
        hme::qbar_shakhov(basis, 1.0, 2.0 / 3.0).Qbar,
        hme::qbar_esbgk(basis, 1.0, 2.0 / 3.0).recursion.Qbar};
    for (const auto& qbar : jacobians) {
      Eigen::MatrixXd q_o = hme::project_matrix(proj, qbar);
      auto stats = hme::analyze_jacobian(q_o, osys.Tdiag);
      REQUIRE(stats.symmetry_residual <= 1e-12);
      REQUIRE(stats.max_eigenvalue <= 1e-10);
      REQUIRE(stats.kernel_dim == 4);
      // the conjugation identity survives every projection
      REQUIRE(max_abs(osys.DbarInv * q_o * osys.Dbar - q_o) <= 1e-12);
      Eigen::MatrixXd Q = hme::unscale_Q(osys, q_o);
      REQUIRE(max_abs(osys.Deq.inverse() * Q * osys.Deq - Q) <= 1e-12);
      if (order == 3) {
        // with disjoint contractions the stronger one-sided forms hold too
        REQUIRE(max_abs(osys.Dbar * q_o - q_o) <= 1e-12);
        REQUIRE(max_abs(q_o * osys.DbarInv - q_o) <= 1e-12);
        REQUIRE(max_abs(osys.Deq * Q * osys.Deq - Q) <= 1e-12);
      }
    }
  }
}

TEST_CASE("full ordered-system check battery") {
  MomentBasis basis(2, 3);
  auto proj = hme::build_projection(basis);
  auto sys = hme::linearize(basis, 1.0, 1.0);
  auto osys = hme::project_system(sys, proj);
  Eigen::MatrixXd q_o = hme::project_matrix(proj, hme::qbar_bgk(basis, 1.0).Qbar);

  hme::SweepConfig sweep;
  sweep.k_steps = 50;
  sweep.directions_2d = 30;
  auto report = hme::run_ohme_checks(osys, q_o, proj, "bgk", sweep, 10, 77);
  REQUIRE(report.stability.time_pass);
  REQUIRE(report.yong.overall);
  REQUIRE(report.pass());
}

TEST_CASE("one-dimensional reports are identical through the projection") {
  MomentBasis basis(1, 4);
  auto proj = hme::build_projection(basis);
  auto sys = hme::linearize(basis, 1.0, 1.0);
  auto osys = hme::project_system(sys, proj);
  Eigen::MatrixXd qbar = hme::qbar_shakhov(basis, 1.0, 2.0 / 3.0).Qbar;
  Eigen::MatrixXd q_o = hme::project_matrix(proj, qbar);
  REQUIRE(q_o == qbar);

  hme::SweepConfig sweep;
  sweep.k_steps = 25;
  sweep.omega_steps = 25;
  auto a = hme::run_stability_checks(sys, qbar, "shakhov", sweep);
  auto b = hme::run_stability_checks(osys, q_o, "shakhov", sweep);
  REQUIRE(a.min_imag == b.min_imag);
  REQUIRE(a.worst_normalized_product == b.worst_normalized_product);
  REQUIRE(a.max_det_residual == b.max_det_residual);
}
