#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "hme/assembly.hpp"
#include "hme/hermite.hpp"
#include "hme/quadrature.hpp"

namespace hme {

enum class CollisionKind { bgk, shakhov, esbgk, binary };

inline const char* to_string(CollisionKind k) {
  switch (k) {
    case CollisionKind::bgk: return "bgk";
    case CollisionKind::shakhov: return "shakhov";
    case CollisionKind::esbgk: return "es-bgk";
    case CollisionKind::binary: return "binary";
  }
  return "?";
}

struct CollisionModel {
  CollisionKind kind = CollisionKind::bgk;
  double tau = 1.0;           // relaxation time (dimensionless units)
  double prandtl = 2.0 / 3.0; // Shakhov / ES-BGK
  double kernel_b0 = 1.0;     // constant Maxwell-molecule kernel magnitude
  int quad_velocity = 16;     // Gauss-Hermite points per velocity axis
  int quad_angle = 16;        // impact directions on the half circle
};

// Linearized collision Jacobian together with the symmetrized-form
// diagnostics. symmetry_residual and max_eigenvalue refer to
// T^{-1} Qbar T; kernel_dim counts eigenvalues below the relative cutoff.
struct JacobianResult {
  Eigen::MatrixXd Qbar;
  double symmetry_residual = 0.0;
  double max_eigenvalue = 0.0;
  int kernel_dim = 0;
};

namespace detail {

inline Eigen::VectorXd symmetrizer_diagonal(const MomentBasis& basis) {
  Eigen::VectorXd t(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    t[i] = 1.0 / std::sqrt(multi_factorial(basis.at(i)));
  return t;
}

// Column map from state slots to raw moments: the identity except on the
// diagonal degree-two slots, where d f_{2e_i} / d w_{2e_d} = delta - 1/D.
inline Eigen::MatrixXd moment_column_map(const MomentBasis& basis) {
  const int n = basis.size();
  const int dim = basis.dim();
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < dim; ++i)
    for (int d = 0; d < dim; ++d)
      C(basis.position_pair(i, i), basis.position_pair(d, d)) =
          (i == d ? 1.0 : 0.0) - 1.0 / dim;
  return C;
}

// I minus the projector onto the conserved slots: zero rows for density
// and velocity, the trace combination removed from the 2 e_d block.
inline Eigen::MatrixXd relaxation_structure(const MomentBasis& basis) {
  const int n = basis.size();
  const int dim = basis.dim();
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n);
  for (int pos = 0; pos < n; ++pos)
    if (basis.at(pos).degree() <= 1) R(pos, pos) = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      R(basis.position_pair(i, i), basis.position_pair(j, j)) -= 1.0 / dim;
  return R;
}

}  // namespace detail

inline JacobianResult analyze_jacobian(Eigen::MatrixXd Qbar,
                                       const Eigen::VectorXd& Tdiag,
                                       double kernel_rel_tol = 1e-8) {
  const int n = static_cast<int>(Qbar.rows());
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = Qbar(i, j) * Tdiag[j] / Tdiag[i];
  JacobianResult out;
  out.symmetry_residual = (sym - sym.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("analyze_jacobian: eigendecomposition failed");
  const Eigen::VectorXd& eig = es.eigenvalues();
  out.max_eigenvalue = eig.maxCoeff();
  double scale = eig.cwiseAbs().maxCoeff();
  out.kernel_dim = (scale == 0.0)
                       ? n
                       : static_cast<int>((eig.cwiseAbs().array() <= kernel_rel_tol * scale).count());
  out.Qbar = std::move(Qbar);
  return out;
}

// BGK: uniform relaxation of every non-conserved moment at rate 1/tau.
inline JacobianResult qbar_bgk(const MomentBasis& basis, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("qbar_bgk: tau must be positive");
  Eigen::MatrixXd Q = (-1.0 / tau) * detail::relaxation_structure(basis);
  return analyze_jacobian(std::move(Q), detail::symmetrizer_diagonal(basis));
}

// Shakhov: BGK plus a slower heat-flux relaxation encoded on the
// e_i + 2 e_k slots; reduces to BGK at Pr = 1.
inline JacobianResult qbar_shakhov(const MomentBasis& basis, double tau, double prandtl) {
  if (!(tau > 0.0) || !(prandtl > 0.0))
    throw std::invalid_argument("qbar_shakhov: tau and Pr must be positive");
  const int dim = basis.dim();
  Eigen::MatrixXd Q = detail::relaxation_structure(basis);
  const double c = (1.0 - prandtl) / (dim + 2.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        int row = basis.position(MultiIndex::unit(dim, i).shifted(k, +2));
        int col = basis.position(MultiIndex::unit(dim, i).shifted(j, +2));
        if (row == MomentBasis::absent || col == MomentBasis::absent) continue;
        Q(row, col) -= c * (i == j ? 3.0 : 1.0);
      }
  Q *= -1.0 / tau;
  return analyze_jacobian(std::move(Q), detail::symmetrizer_diagonal(basis));
}

namespace detail {

// First-order expansion of the anisotropic-Gaussian moments G_alpha in
// the stress entries sigma_{ij} (i <= j), at sigma = 0 and unit density.
struct StressDual {
  double value = 0.0;
  Eigen::VectorXd grad;
};

class GaussianMomentExpansion {
public:
  GaussianMomentExpansion(int dim, double prandtl)
      : dim_(dim), c_(1.0 - 1.0 / prandtl), nslots_(dim * (dim + 1) / 2) {}

  int slot(int i, int j) const {  // unordered pair -> [0, D(D+1)/2)
    if (i > j) std::swap(i, j);
    int s = 0;
    for (int a = 0; a < i; ++a) s += dim_ - a;
    return s + (j - i);
  }

  const StressDual& moment(const MultiIndex& a) {
    auto it = memo_.find(key(a));
    if (it != memo_.end()) return it->second;
    StressDual g;
    g.grad = Eigen::VectorXd::Zero(nslots_);
    if (a.degree() == 0) {
      g.value = 1.0;  // unit density
    } else if (a.degree() % 2 == 1) {
      g.value = 0.0;
    } else {
      int i = 0;
      while (a[i] == 0) ++i;
      for (int d = 0; d < dim_; ++d) {
        MultiIndex b = a.shifted(i, -1).shifted(d, -1);
        if (!b.nonnegative()) continue;
        const StressDual& inner = moment(b);
        // product rule with sigma_{id} (value 0, unit gradient)
        g.grad[slot(i, d)] += c_ / a[i] * inner.value;
      }
    }
    return memo_.emplace(key(a), std::move(g)).first->second;
  }

private:
  long key(const MultiIndex& a) const { return (a[0] * 64 + a[1]) * 64 + a[2]; }

  int dim_;
  double c_;
  int nslots_;
  std::map<long, StressDual> memo_;
};

}  // namespace detail

// ES-BGK Jacobian obtained two ways: by differentiating the
// anisotropic-Gaussian recursion through the stress dependence (the
// `recursion` result, used downstream) and by the closed form, whose
// off-diagonal stress slots relax at a different rate. The gap between
// the two is reported, not resolved.
struct EsbgkJacobian {
  JacobianResult recursion;
  Eigen::MatrixXd closed_form;
  double closed_form_discrepancy = 0.0;
};

inline EsbgkJacobian qbar_esbgk(const MomentBasis& basis, double tau, double prandtl) {
  if (!(tau > 0.0) || !(prandtl > 0.0))
    throw std::invalid_argument("qbar_esbgk: tau and Pr must be positive");
  const int n = basis.size();
  const int dim = basis.dim();

  // d sigma_{ij} / d w: mixed slots are copied, diagonal slots are
  // 2 delta - 2/D combinations of the 2 e_d slots.
  detail::GaussianMomentExpansion expansion(dim, prandtl);
  Eigen::MatrixXd sigma_map = Eigen::MatrixXd::Zero(dim * (dim + 1) / 2, n);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      int s = expansion.slot(i, j);
      if (i == j) {
        for (int d = 0; d < dim; ++d)
          sigma_map(s, basis.position_pair(d, d)) = 2.0 * (i == d ? 1.0 : 0.0) - 2.0 / dim;
      } else {
        sigma_map(s, basis.position_pair(i, j)) = 1.0;
      }
    }
  const Eigen::MatrixXd f_map = detail::moment_column_map(basis);

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    const MultiIndex& a = basis.at(row);
    if (a.degree() <= 1) continue;
    Eigen::RowVectorXd drow = expansion.moment(a).grad.transpose() * sigma_map;
    drow -= f_map.row(row);
    Q.row(row) = (prandtl / tau) * drow;
  }

  EsbgkJacobian out;
  out.recursion = analyze_jacobian(std::move(Q), detail::symmetrizer_diagonal(basis));

  Eigen::MatrixXd closed = Eigen::MatrixXd::Identity(n, n);
  for (int pos = 0; pos < n; ++pos)
    if (basis.at(pos).degree() <= 2) closed(pos, pos) = 0.0;
  closed *= -prandtl / tau;
  for (int i = 0; i < dim; ++i) {
    closed(basis.position_pair(i, i), basis.position_pair(i, i)) -= 1.0 / tau;
    for (int j = 0; j < dim; ++j)
      closed(basis.position_pair(i, i), basis.position_pair(j, j)) += 1.0 / (tau * dim);
  }
  out.closed_form = std::move(closed);
  out.closed_form_discrepancy =
      (out.recursion.Qbar - out.closed_form).cwiseAbs().maxCoeff();
  return out;
}

// Binary (pairwise) collision Jacobian by quadrature: tensor
// Gauss-Hermite over both incoming velocities and a uniform rule over the
// impact direction on the half circle. Supported in two dimensions,
// where one-dimensional collisions would be degenerate and three
// dimensions would need a five-fold sphere-product rule.
inline JacobianResult qbar_binary(const MomentBasis& basis, const CollisionModel& model,
                                  int threads = 0) {
  if (basis.dim() != 2)
    throw std::invalid_argument("qbar_binary: supported in two dimensions only");
  if (basis.order() > 4)
    throw std::invalid_argument("qbar_binary: moment order capped at 4");
  if (model.quad_velocity < 8 || model.quad_angle < 8)
    throw std::invalid_argument("qbar_binary: quadrature orders must be at least 8");
  if (!(model.kernel_b0 > 0.0))
    throw std::invalid_argument("qbar_binary: kernel magnitude must be positive");

  const int n = basis.size();
  const int nv = model.quad_velocity;
  const int na = model.quad_angle;
  const GaussHermiteRule rule = gauss_hermite(nv);
  const HermiteWeight weight;  // u = 0, theta = 1

  // Impact directions and the rotation data; the integrand has period pi.
  std::vector<double> cs(na), sn(na);
  for (int a = 0; a < na; ++a) {
    double phi = std::numbers::pi * a / na;
    cs[a] = std::cos(phi);
    sn[a] = std::sin(phi);
  }
  const double angle_weight = std::numbers::pi / na;

  // He_alpha at all incoming-velocity nodes, cached per node pair.
  Eigen::MatrixXd he_in(n, nv * nv);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) {
      double xi[2] = {rule.nodes[i], rule.nodes[j]};
      hermite_he_all(basis, xi, weight, he_in.col(i * nv + j).data());
    }

  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min(nthreads, nv * nv);

  // One partial sum per outer node pair; the final reduction runs in a
  // fixed order so the result does not depend on the thread count.
  std::vector<Eigen::MatrixXd> partial(nv * nv);
  auto work = [&](int begin, int end) {
    Eigen::VectorXd l_vec(n), he_post(n), he_post1(n);
    for (int outer = begin; outer < end; ++outer) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
      const int i1 = outer / nv, i2 = outer % nv;
      const double xi_x = rule.nodes[i1], xi_y = rule.nodes[i2];
      const double w_xi = rule.weights[i1] * rule.weights[i2];
      for (int j1 = 0; j1 < nv; ++j1)
        for (int j2 = 0; j2 < nv; ++j2) {
          const double eta_x = rule.nodes[j1], eta_y = rule.nodes[j2];
          const double w_pair = w_xi * rule.weights[j1] * rule.weights[j2];
          const double rel_x = eta_x - xi_x, rel_y = eta_y - xi_y;
          const auto& he_xi = he_in.col(i1 * nv + i2);
          const auto& he_eta = he_in.col(j1 * nv + j2);
          for (int a = 0; a < na; ++a) {
            const double t = rel_x * cs[a] + rel_y * sn[a];
            double post[2] = {xi_x + t * cs[a], xi_y + t * sn[a]};
            double post1[2] = {eta_x - t * cs[a], eta_y - t * sn[a]};
            hermite_he_all(basis, post, weight, he_post.data());
            hermite_he_all(basis, post1, weight, he_post1.data());
            l_vec = he_post + he_post1 - he_xi - he_eta;
            acc.selfadjointView<Eigen::Lower>().rankUpdate(l_vec, w_pair * angle_weight);
          }
        }
      partial[outer] = std::move(acc);
    }
  };
  if (nthreads == 1) {
    work(0, nv * nv);
  } else {
    std::vector<std::thread> pool;
    int chunk = (nv * nv + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      int begin = t * chunk, end = std::min(nv * nv, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : partial) X += p;
  X = Eigen::MatrixXd(X.selfadjointView<Eigen::Lower>());
  X *= -0.25 * model.kernel_b0;

  // Row scale 1/alpha!, then the state-slot column map.
  Eigen::MatrixXd Q(n, n);
  for (int row = 0; row < n; ++row)
    Q.row(row) = X.row(row) / multi_factorial(basis.at(row));
  Q = Q * detail::moment_column_map(basis);
  return analyze_jacobian(std::move(Q), detail::symmetrizer_diagonal(basis));
}

// Dispatch on the model kind; ES-BGK uses the recursion-based Jacobian.
inline Eigen::MatrixXd qbar_for(const MomentBasis& basis, const CollisionModel& model,
                                int threads = 0) {
  switch (model.kind) {
    case CollisionKind::bgk: return qbar_bgk(basis, model.tau).Qbar;
    case CollisionKind::shakhov: return qbar_shakhov(basis, model.tau, model.prandtl).Qbar;
    case CollisionKind::esbgk: return qbar_esbgk(basis, model.tau, model.prandtl).recursion.Qbar;
    case CollisionKind::binary: return qbar_binary(basis, model, threads).Qbar;
  }
  throw std::invalid_argument("qbar_for: unknown collision kind");
}

// Undo the dimensionless scaling: Q(w_eq) = sqrt(theta0) Lambda1 Qbar
// Lambda1^{-1} (unit characteristic length).
inline Eigen::MatrixXd unscale_Q(const LinearizedSystem& sys, const Eigen::MatrixXd& Qbar) {
  if (Qbar.rows() != sys.size() || Qbar.cols() != sys.size())
    throw std::invalid_argument("unscale_Q: shape mismatch");
  const int n = sys.size();
  Eigen::MatrixXd Q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Q(i, j) = std::sqrt(sys.theta0) * sys.Lambda1[i] * Qbar(i, j) / sys.Lambda1[j];
  return Q;
}

}  // namespace hme
