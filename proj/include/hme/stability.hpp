#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "hme/assembly.hpp"

namespace hme {

namespace detail {

inline bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline std::string matrix_dump(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

}  // namespace detail

// All plane-wave frequencies Omega at a real wave vector k: the
// eigenvalues of sum_d k_d Abar_d - i Qbar. Stability in time means no
// frequency with negative imaginary part.
struct TimeDispersionPoint {
  Eigen::VectorXd k;
  Eigen::VectorXcd omegas;  // sorted by (Re, Im)
  double min_imag = 0.0;
};

inline TimeDispersionPoint time_dispersion(const LinearizedSystem& sys,
                                           const Eigen::MatrixXd& Qbar,
                                           const Eigen::VectorXd& k) {
  if (k.size() != sys.dim)
    throw std::invalid_argument("time_dispersion: wave vector dimension mismatch");
  const int n = sys.size();
  Eigen::MatrixXd symbol = Eigen::MatrixXd::Zero(n, n);
  for (int d = 0; d < sys.dim; ++d) symbol += k[d] * sys.Abar[d];
  Eigen::MatrixXcd m = symbol.cast<std::complex<double>>();
  m -= std::complex<double>(0.0, 1.0) * Qbar.cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("time_dispersion: eigensolver failed on\n" +
                             detail::matrix_dump(m));
  TimeDispersionPoint out;
  out.k = k;
  out.omegas = es.eigenvalues();
  std::sort(out.omegas.data(), out.omegas.data() + n, detail::complex_less);
  out.min_imag = out.omegas.imag().minCoeff();
  return out;
}

// Finite solutions k of det(k A - i B - lambda I) = 0 for real square A,
// B and lambda > 0. Computed through the eigenvalues mu of
// (lambda I + i B)^{-1} A, which is well defined whenever i B has no
// eigenvalue at -lambda; mu = 0 marks a root at infinity.
struct PencilRoots {
  std::vector<std::complex<double>> finite;
  int infinite_count = 0;
};

inline PencilRoots pencil_roots(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                double lambda, double infinite_rel_tol = 1e-12) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXcd W = std::complex<double>(0.0, 1.0) * B.cast<std::complex<double>>();
  W += lambda * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd F = W.partialPivLu().solve(A.cast<std::complex<double>>());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(F, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pencil_roots: eigensolver failed on\n" +
                             detail::matrix_dump(F));
  const double cutoff = infinite_rel_tol * F.norm();
  PencilRoots out;
  for (int i = 0; i < n; ++i) {
    std::complex<double> mu = es.eigenvalues()[i];
    if (std::abs(mu) <= cutoff)
      ++out.infinite_count;
    else
      out.finite.push_back(1.0 / mu);
  }
  std::sort(out.finite.begin(), out.finite.end(), detail::complex_less);
  return out;
}

// Complex wave numbers k at a real driving frequency omega > 0 for a
// one-dimensional system. Spatial stability requires Re(k) Im(k) <= 0
// for every finite root.
struct SpaceDispersionPoint {
  double omega = 0.0;
  std::vector<std::complex<double>> roots;  // finite, sorted by (Re, Im)
  int infinite_count = 0;
  double worst_normalized_product = 0.0;  // max over roots of k_r k_i / |k|^2
  double max_det_residual = 0.0;          // Hadamard-normalized singularity check
};

inline SpaceDispersionPoint space_dispersion_1d(const LinearizedSystem& sys,
                                                const Eigen::MatrixXd& Qbar,
                                                double omega,
                                                double infinite_rel_tol = 1e-12) {
  if (sys.dim != 1)
    throw std::invalid_argument("space_dispersion_1d: one-dimensional systems only");
  if (!(omega > 0.0))
    throw std::invalid_argument("space_dispersion_1d: omega must be positive");
  const int n = sys.size();
  PencilRoots roots = pencil_roots(sys.Abar[0], Qbar, omega, infinite_rel_tol);
  if (roots.finite.empty())
    throw std::runtime_error("space_dispersion_1d: degenerate pencil, all roots infinite");

  SpaceDispersionPoint out;
  out.omega = omega;
  out.roots = std::move(roots.finite);
  out.infinite_count = roots.infinite_count;
  const Eigen::MatrixXcd A1 = sys.Abar[0].cast<std::complex<double>>();
  const Eigen::MatrixXcd iQ =
      std::complex<double>(0.0, 1.0) * Qbar.cast<std::complex<double>>();
  for (const std::complex<double>& k : out.roots) {
    double product = k.real() * k.imag() / std::norm(k);
    out.worst_normalized_product = std::max(out.worst_normalized_product, product);
    Eigen::MatrixXcd m = k * A1 - iQ;
    m -= omega * Eigen::MatrixXcd::Identity(n, n);
    double hadamard = 1.0;
    for (int r = 0; r < n; ++r) hadamard *= m.row(r).norm();
    double det = std::abs(m.partialPivLu().determinant());
    out.max_det_residual =
        std::max(out.max_det_residual, hadamard > 0.0 ? det / hadamard : det);
  }
  return out;
}

// Randomized check of the two spectral facts behind the stability
// theorem: for symmetric A and symmetric negative semi-definite B, every
// eigenvalue of A - iB has non-negative imaginary part, and every finite
// root k of det(k A - i B - lambda I) = 0 with lambda > 0 satisfies
// Re(k) Im(k) <= 0.
struct LemmaHarnessStats {
  int trials = 0;
  int eigenvalue_violations = 0;
  int pencil_violations = 0;
  double worst_min_imag = 0.0;             // most negative Im(eigenvalue)
  double worst_normalized_product = 0.0;   // largest k_r k_i / |k|^2

  bool pass() const { return eigenvalue_violations == 0 && pencil_violations == 0; }
};

inline LemmaHarnessStats lemma_property_harness(int trials, int n, std::uint64_t seed,
                                                double tol = 1e-10) {
  if (n < 1 || n > 32)
    throw std::invalid_argument("lemma_property_harness: size must be in [1, 32]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lambda_dist(0.1, 3.0);
  LemmaHarnessStats stats;
  stats.trials = trials;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd G(n, n), H(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        G(i, j) = gauss(rng);
        H(i, j) = gauss(rng);
      }
    Eigen::MatrixXd A = 0.5 * scale * (G + G.transpose());
    Eigen::MatrixXd B = -(H * H.transpose()) * (scale * scale);

    Eigen::MatrixXcd m = A.cast<std::complex<double>>() -
                         std::complex<double>(0.0, 1.0) * B.cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("lemma_property_harness: eigensolver failed");
    double min_imag = es.eigenvalues().imag().minCoeff();
    stats.worst_min_imag = std::min(stats.worst_min_imag, min_imag);
    if (min_imag < -tol) ++stats.eigenvalue_violations;

    double lambda = lambda_dist(rng);
    PencilRoots roots = pencil_roots(A, B, lambda);
    bool violated = false;
    for (const std::complex<double>& k : roots.finite) {
      double product = k.real() * k.imag() / std::norm(k);
      stats.worst_normalized_product = std::max(stats.worst_normalized_product, product);
      if (product > tol) violated = true;
    }
    if (violated) ++stats.pencil_violations;
  }
  return stats;
}

// Sweep description shared by the verification driver and the CLI.
struct SweepConfig {
  double k_min = 1e-2, k_max = 1e2;
  int k_steps = 200;
  bool log_spacing = true;
  double omega_min = 1e-2, omega_max = 1e2;
  int omega_steps = 100;
  int directions_2d = 100;       // random directions x magnitudes when dim >= 2
  std::uint64_t seed = 20240127;
  double time_tol = 1e-9;        // min Im(Omega) >= -tol
  double space_tol = 1e-9;       // k_r k_i <= tol |k|^2
  double det_tol = 1e-8;
};

inline std::vector<double> sweep_values(double lo, double hi, int steps, bool log_spacing) {
  if (steps < 1 || !(lo > 0.0 && hi >= lo))
    throw std::invalid_argument("sweep_values: invalid range");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    out[i] = log_spacing ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
  }
  return out;
}

// Aggregate verdict of a dispersion sweep for one (system, model) pair.
struct StabilityReport {
  std::string system, model;
  int dim = 1, order = 3;
  double min_imag = 0.0;                   // over the time sweep
  double worst_normalized_product = 0.0;   // over the space sweep (dim 1)
  double max_det_residual = 0.0;
  bool time_pass = false;
  bool space_pass = true;  // vacuously true when the space sweep is skipped
  bool pass() const { return time_pass && space_pass; }
};

inline StabilityReport run_stability_checks(const LinearizedSystem& sys,
                                            const Eigen::MatrixXd& Qbar,
                                            const std::string& model,
                                            const SweepConfig& sweep) {
  StabilityReport report;
  report.system = sys.system;
  report.model = model;
  report.dim = sys.dim;
  report.order = sys.order;

  double min_imag = 0.0;
  if (sys.dim == 1) {
    for (double k : sweep_values(sweep.k_min, sweep.k_max, sweep.k_steps, sweep.log_spacing)) {
      Eigen::VectorXd kv(1);
      kv << k;
      min_imag = std::min(min_imag, time_dispersion(sys, Qbar, kv).min_imag);
    }
  } else {
    std::mt19937_64 rng(sweep.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> log_mag(std::log(sweep.k_min), std::log(sweep.k_max));
    for (int i = 0; i < sweep.directions_2d; ++i) {
      double mag = std::exp(log_mag(rng));
      double psi = angle(rng);
      Eigen::VectorXd kv = Eigen::VectorXd::Zero(sys.dim);
      kv[0] = mag * std::cos(psi);
      kv[1] = mag * std::sin(psi);
      if (sys.dim == 3) {
        double psi2 = angle(rng);
        kv[1] *= std::cos(psi2);
        kv[2] = mag * std::sin(psi) * std::sin(psi2);
      }
      min_imag = std::min(min_imag, time_dispersion(sys, Qbar, kv).min_imag);
    }
  }
  report.min_imag = min_imag;
  report.time_pass = min_imag >= -sweep.time_tol;

  if (sys.dim == 1) {
    double worst = 0.0, det_res = 0.0;
    for (double omega :
         sweep_values(sweep.omega_min, sweep.omega_max, sweep.omega_steps, sweep.log_spacing)) {
      SpaceDispersionPoint pt = space_dispersion_1d(sys, Qbar, omega);
      worst = std::max(worst, pt.worst_normalized_product);
      det_res = std::max(det_res, pt.max_det_residual);
    }
    report.worst_normalized_product = worst;
    report.max_det_residual = det_res;
    report.space_pass = worst <= sweep.space_tol && det_res <= sweep.det_tol;
  }
  return report;
}

}  // namespace hme
