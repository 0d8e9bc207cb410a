#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "hme/moment_basis.hpp"

namespace hme {

// Parameters of the Gaussian weight: mean velocity u and temperature
// theta (variance per axis).
struct HermiteWeight {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double theta = 1.0;
};

inline void check_weight(const HermiteWeight& w) {
  if (!(w.theta > 0.0))
    throw std::invalid_argument("HermiteWeight: theta must be positive");
}

// omega^{[u,theta]}(xi), the normalized Gaussian.
inline double weight_value(std::span<const double> xi, const HermiteWeight& w) {
  check_weight(w);
  const int dim = static_cast<int>(xi.size());
  double q = 0.0;
  for (int d = 0; d < dim; ++d) {
    double s = xi[d] - w.u[d];
    q += s * s;
  }
  double norm = std::pow(2.0 * std::numbers::pi * w.theta, -0.5 * dim);
  return norm * std::exp(-0.5 * q / w.theta);
}

// Fills out[0..nmax] with the derivative ratios g_n = omega^{-1} d^n
// omega/dx^n of the one-dimensional weight. The sign convention follows
// the derivative definition, so g_1 = -(x-u)/theta.
inline void hermite_ratio_sequence(int nmax, double x, double u, double theta,
                                   double* out) {
  const double s = (x - u) / theta;
  out[0] = 1.0;
  if (nmax >= 1) out[1] = -s;
  for (int n = 1; n < nmax; ++n)
    out[n + 1] = -s * out[n] - (n / theta) * out[n - 1];
}

// He_alpha^{[u,theta]}(xi): product of per-axis derivative ratios.
inline double hermite_he(const MultiIndex& a, std::span<const double> xi,
                         const HermiteWeight& w) {
  check_weight(w);
  if (static_cast<int>(xi.size()) != a.dim())
    throw std::invalid_argument("hermite_he: point dimension mismatch");
  if (a.degree() > 15)
    throw std::invalid_argument("hermite_he: degree out of supported range");
  double value = 1.0;
  double table[16];
  for (int d = 0; d < a.dim(); ++d) {
    hermite_ratio_sequence(a[d], xi[d], w.u[d], w.theta, table);
    value *= table[a[d]];
  }
  return value;
}

// H_alpha = He_alpha * omega, the (unnormalized) expansion basis.
inline double hermite_h(const MultiIndex& a, std::span<const double> xi,
                        const HermiteWeight& w) {
  return hermite_he(a, xi, w) * weight_value(xi, w);
}

// He_alpha at a single point for every index of the basis, sharing the
// per-axis recurrence tables. Hot path of the collision quadrature.
inline void hermite_he_all(const MomentBasis& basis, const double* xi,
                           const HermiteWeight& w, double* out) {
  const int dim = basis.dim();
  const int order = basis.order();
  double table[3][16];
  for (int d = 0; d < dim; ++d)
    hermite_ratio_sequence(order, xi[d], w.u[d], w.theta, table[d]);
  const int n = basis.size();
  for (int i = 0; i < n; ++i) {
    const MultiIndex& a = basis.at(i);
    double v = table[0][a[0]];
    for (int d = 1; d < dim; ++d) v *= table[d][a[d]];
    out[i] = v;
  }
}

}  // namespace hme
