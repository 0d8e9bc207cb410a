#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace hme {

// Nodes and weights for the probabilists' Gaussian weight
// exp(-x^2/2)/sqrt(2*pi); weights sum to one.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
// recurrence (off-diagonal sqrt(k)); exact for polynomials of degree
// <= 2n-1.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1 || n > 64)
    throw std::invalid_argument("gauss_hermite: node count must be in [1, 64]");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: Jacobi eigendecomposition failed");
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = es.eigenvectors().row(0).array().square();
  return rule;
}

}  // namespace hme
