// Command-line driver: dispersion sweeps and verification reports for
// hyperbolic moment systems.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hme/hme.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUnstable = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  int dim = 1;
  int order = 3;
  std::string system = "hme";
  std::string model = "bgk";
  double tau = 1.0;
  double prandtl = 2.0 / 3.0;
  double kernel_b0 = 1.0;
  int quad_velocity = 16;
  int quad_angle = 16;
  double rho0 = 1.0;
  double theta0 = 1.0;
  double k_min = 1e-2, k_max = 1e2;
  int k_steps = 200;
  double omega_min = 1e-2, omega_max = 1e2;
  int omega_steps = 100;
  bool log_spacing = false;
  int directions = 100;
  std::uint64_t seed = 20240127;
  double time_tol = 1e-9;
  double space_tol = 1e-9;
  double det_tol = 1e-8;
  std::string output;
  std::string format = "csv";
  std::string state_file;
};

int worker_count() {
  if (const char* env = std::getenv("HME_WORKERS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

hme::CollisionModel collision_model(const RunConfig& cfg) {
  hme::CollisionModel model;
  if (cfg.model == "bgk") model.kind = hme::CollisionKind::bgk;
  else if (cfg.model == "shakhov") model.kind = hme::CollisionKind::shakhov;
  else if (cfg.model == "es-bgk") model.kind = hme::CollisionKind::esbgk;
  else if (cfg.model == "binary") model.kind = hme::CollisionKind::binary;
  else throw CLI::ValidationError("--model", "unknown collision model: " + cfg.model);
  model.tau = cfg.tau;
  model.prandtl = cfg.prandtl;
  model.kernel_b0 = cfg.kernel_b0;
  model.quad_velocity = cfg.quad_velocity;
  model.quad_angle = cfg.quad_angle;
  return model;
}

// Linearized system plus collision Jacobian for the configured system
// ("none" yields the collisionless Qbar = 0).
struct Problem {
  hme::LinearizedSystem sys;
  Eigen::MatrixXd qbar;
  std::unique_ptr<hme::OhmeProjection> projection;  // set for the ordered system
};

Problem build_problem(const RunConfig& cfg) {
  hme::MomentBasis basis(cfg.dim, cfg.order);
  Problem p;
  p.sys = hme::linearize(basis, cfg.rho0, cfg.theta0);
  p.qbar = cfg.model == "none"
               ? Eigen::MatrixXd::Zero(basis.size(), basis.size()).eval()
               : hme::qbar_for(basis, collision_model(cfg), worker_count());
  if (cfg.system == "ohme") {
    p.projection = std::make_unique<hme::OhmeProjection>(hme::build_projection(basis));
    p.qbar = hme::project_matrix(*p.projection, p.qbar);
    p.sys = hme::project_system(p.sys, *p.projection);
  }
  return p;
}

std::ostream& open_output(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.output.empty()) return std::cout;
  file.open(cfg.output);
  if (!file) throw CLI::ValidationError("--output", "cannot open " + cfg.output);
  return file;
}

std::string config_header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "dim=" << cfg.dim << " order=" << cfg.order << " system=" << cfg.system
     << " model=" << cfg.model << " tau=" << cfg.tau << " pr=" << cfg.prandtl;
  return os.str();
}

json config_json(const RunConfig& cfg) {
  return json{{"dim", cfg.dim},       {"order", cfg.order},   {"system", cfg.system},
              {"model", cfg.model},   {"tau", cfg.tau},       {"pr", cfg.prandtl},
              {"rho0", cfg.rho0},     {"theta0", cfg.theta0}};
}

void validate_common(const RunConfig& cfg) {
  if (cfg.order < 3)
    throw CLI::ValidationError("--order", "moment order must be at least 3");
  if (cfg.dim < 1 || cfg.dim > 3)
    throw CLI::ValidationError("--dim", "dimension must be 1, 2 or 3");
  if (cfg.system != "hme" && cfg.system != "ohme" && cfg.system != "grad1d")
    throw CLI::ValidationError("--system", "unknown system: " + cfg.system);
}

int cmd_dispersion_time(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.k_steps < 1) throw CLI::ValidationError("--ksteps", "need at least one step");
  Problem p = build_problem(cfg);
  const int n = p.sys.size();

  // 1-D sweeps walk the magnitudes directly; in higher dimensions each
  // sweep point picks a seeded random direction for the same magnitude.
  auto mags = hme::sweep_values(cfg.k_min, cfg.k_max, cfg.k_steps, cfg.log_spacing);
  std::vector<Eigen::VectorXd> kvecs(mags.size());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (size_t i = 0; i < mags.size(); ++i) {
    Eigen::VectorXd k = Eigen::VectorXd::Zero(cfg.dim);
    if (cfg.dim == 1) {
      k[0] = mags[i];
    } else {
      double psi = angle(rng);
      k[0] = mags[i] * std::cos(psi);
      k[1] = mags[i] * std::sin(psi);
      if (cfg.dim == 3) {
        double psi2 = angle(rng);
        k[1] *= std::cos(psi2);
        k[2] = mags[i] * std::sin(psi) * std::sin(psi2);
      }
    }
    kvecs[i] = k;
  }

  std::vector<hme::TimeDispersionPoint> points(kvecs.size());
  std::exception_ptr failure;
  parallel_for(static_cast<int>(kvecs.size()), [&](int i) {
    try {
      points[i] = hme::time_dispersion(p.sys, p.qbar, kvecs[i]);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  bool all_pass = true;
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << std::setprecision(17);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& pt : points) {
      json omegas = json::array();
      for (int j = 0; j < n; ++j)
        omegas.push_back({pt.omegas[j].real(), pt.omegas[j].imag()});
      bool pass = pt.min_imag >= -cfg.time_tol;
      all_pass = all_pass && pass;
      rows.push_back({{"k", std::vector<double>(pt.k.data(), pt.k.data() + cfg.dim)},
                      {"omega", omegas},
                      {"min_im", pt.min_imag},
                      {"pass", pass}});
    }
    os << json{{"schema", 1}, {"config", config_json(cfg)}, {"rows", rows}}.dump(2)
       << "\n";
  } else {
    os << "# " << config_header(cfg) << "\n";
    for (int d = 0; d < cfg.dim; ++d) os << "k" << (d + 1) << ",";
    for (int j = 1; j <= n; ++j) os << "re_omega_" << j << ",im_omega_" << j << ",";
    os << "min_im,verdict\n";
    for (const auto& pt : points) {
      bool pass = pt.min_imag >= -cfg.time_tol;
      all_pass = all_pass && pass;
      for (int d = 0; d < cfg.dim; ++d) os << pt.k[d] << ",";
      for (int j = 0; j < n; ++j)
        os << pt.omegas[j].real() << "," << pt.omegas[j].imag() << ",";
      os << pt.min_imag << "," << (pass ? "PASS" : "FAIL") << "\n";
    }
  }
  return all_pass ? kExitOk : kExitUnstable;
}

int cmd_dispersion_space(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.dim != 1)
    throw CLI::ValidationError("--dim", "spatial dispersion supports dimension 1 only");
  if (cfg.omega_steps < 1)
    throw CLI::ValidationError("--omega-steps", "need at least one step");
  if (!(cfg.omega_min > 0.0))
    throw CLI::ValidationError("--omega-min", "frequency must be strictly positive");
  Problem p = build_problem(cfg);
  const int n = p.sys.size();

  auto omegas =
      hme::sweep_values(cfg.omega_min, cfg.omega_max, cfg.omega_steps, cfg.log_spacing);
  std::vector<hme::SpaceDispersionPoint> points(omegas.size());
  std::exception_ptr failure;
  parallel_for(static_cast<int>(omegas.size()), [&](int i) {
    try {
      points[i] = hme::space_dispersion_1d(p.sys, p.qbar, omegas[i]);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  bool all_pass = true;
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << std::setprecision(17);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& pt : points) {
      bool pass = pt.worst_normalized_product <= cfg.space_tol &&
                  pt.max_det_residual <= cfg.det_tol;
      all_pass = all_pass && pass;
      json roots = json::array();
      for (const auto& k : pt.roots) roots.push_back({k.real(), k.imag()});
      rows.push_back({{"omega", pt.omega},
                      {"roots", roots},
                      {"infinite", pt.infinite_count},
                      {"worst_product", pt.worst_normalized_product},
                      {"det_residual", pt.max_det_residual},
                      {"pass", pass}});
    }
    os << json{{"schema", 1}, {"config", config_json(cfg)}, {"rows", rows}}.dump(2)
       << "\n";
  } else {
    os << "# " << config_header(cfg) << "\n";
    os << "omega,";
    for (int j = 1; j <= n; ++j) os << "re_k_" << j << ",im_k_" << j << ",";
    os << "n_infinite,worst_product,det_residual,verdict\n";
    for (const auto& pt : points) {
      bool pass = pt.worst_normalized_product <= cfg.space_tol &&
                  pt.max_det_residual <= cfg.det_tol;
      all_pass = all_pass && pass;
      os << pt.omega << ",";
      for (int j = 0; j < n; ++j) {
        if (j < static_cast<int>(pt.roots.size()))
          os << pt.roots[j].real() << "," << pt.roots[j].imag() << ",";
        else
          os << ",,";  // root at infinity
      }
      os << pt.infinite_count << "," << pt.worst_normalized_product << ","
         << pt.max_det_residual << "," << (pass ? "PASS" : "FAIL") << "\n";
    }
  }
  return all_pass ? kExitOk : kExitUnstable;
}

// State file: JSON object keyed by comma-separated multi-indices, values
// overriding the equilibrium entries of w.
hme::MomentState load_state(const hme::MomentBasis& basis, const RunConfig& cfg) {
  hme::MomentState state = hme::MomentState::equilibrium(basis, cfg.rho0, cfg.theta0);
  if (cfg.state_file.empty()) return state;
  std::ifstream in(cfg.state_file);
  if (!in)
    throw CLI::ValidationError("--state-file", "cannot open " + cfg.state_file);
  json doc = json::parse(in);
  Eigen::VectorXd w = state.w();
  for (auto& [key, value] : doc.items()) {
    hme::MultiIndex idx(basis.dim());
    std::istringstream is(key);
    std::string part;
    int d = 0;
    while (std::getline(is, part, ',')) {
      if (d >= basis.dim())
        throw CLI::ValidationError("--state-file", "bad index key: " + key);
      idx[d++] = std::stoi(part);
    }
    if (d != basis.dim())
      throw CLI::ValidationError("--state-file", "bad index key: " + key);
    int pos = basis.position(idx);
    if (pos == hme::MomentBasis::absent)
      throw CLI::ValidationError("--state-file", "index out of range: " + key);
    w[pos] = value.get<double>();
  }
  return hme::MomentState(basis, std::move(w));
}

json report_json(const hme::StabilityReport& r) {
  return json{{"system", r.system},
              {"model", r.model},
              {"min_im", r.min_imag},
              {"worst_product", r.worst_normalized_product},
              {"det_residual", r.max_det_residual},
              {"time_pass", r.time_pass},
              {"space_pass", r.space_pass},
              {"pass", r.pass()}};
}

json report_json(const hme::YongReport& r) {
  return json{
      {"condition1",
       {{"conserved_row_residual", r.cond1.conserved_row_residual},
        {"conserved_rows_zero", r.cond1.conserved_rows_zero},
        {"rank_q", r.cond1.rank_q},
        {"rank_q_squared", r.cond1.rank_q_squared},
        {"pass", r.cond1.pass}}},
      {"condition2",
       {{"max_sym_residual", r.cond2.max_sym_residual},
        {"min_a0_eigenvalue", r.cond2.min_a0_eigenvalue},
        {"pass", r.cond2.pass}}},
      {"condition3",
       {{"product_sym_residual", r.cond3.product_sym_residual},
        {"identity_residual", r.cond3.identity_residual},
        {"max_eigenvalue", r.cond3.max_eigenvalue},
        {"kernel_dim", r.cond3.kernel_dim},
        {"kernel_match", r.cond3.kernel_match},
        {"reconstruction_residual", r.cond3.reconstruction_residual},
        {"pass", r.cond3.pass}}},
      {"dq_identity_residual", r.dq_identity_residual},
      {"dq_onesided_residual", r.dq_onesided_residual},
      {"overall", r.overall},
      {"pass", r.overall}};
}

int cmd_verify(const RunConfig& cfg) {
  validate_common(cfg);
  json sections = json::array();
  bool overall = true;

  if (cfg.system == "grad1d") {
    if (cfg.dim != 1)
      throw CLI::ValidationError("--dim", "the grad1d contrast is one-dimensional");
    hme::MomentBasis basis(1, cfg.order);
    hme::MomentState state = load_state(basis, cfg);

    auto eq = hme::MomentState::equilibrium(basis, cfg.rho0, cfg.theta0);
    Eigen::MatrixXd hme_flux = hme::assemble_M(eq, 0) * hme::assemble_D(eq);
    Eigen::MatrixXd grad_flux = hme::assemble_grad_flux_1d(eq);
    double agreement = (hme_flux - grad_flux).cwiseAbs().maxCoeff();
    bool agree_pass = agreement <= 1e-12;

    auto spectrum_imag = [](const Eigen::MatrixXd& m) {
      Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("verify: eigensolver failed");
      return es.eigenvalues().imag().cwiseAbs().maxCoeff();
    };
    Eigen::MatrixXd grad_char =
        hme::assemble_Dinv(state) * hme::assemble_grad_flux_1d(state);
    double grad_imag = spectrum_imag(grad_char);
    double hme_imag = spectrum_imag(hme::assemble_A(state, 0));
    bool hme_hyperbolic = hme_imag <= 1e-10;
    bool grad_hyperbolic = grad_imag <= 1e-6;

    sections.push_back({{"name", "grad_equilibrium_agreement"},
                        {"residual", agreement},
                        {"pass", agree_pass}});
    sections.push_back({{"name", "hyperbolicity_contrast"},
                        {"grad_max_imag", grad_imag},
                        {"grad_hyperbolic", grad_hyperbolic},
                        {"hme_max_imag", hme_imag},
                        {"hme_hyperbolic", hme_hyperbolic},
                        {"pass", hme_hyperbolic}});
    overall = agree_pass && hme_hyperbolic;
  } else {
    Problem p = build_problem(cfg);

    // symmetrizer
    double sym_res = 0.0;
    for (int d = 0; d < cfg.dim; ++d) {
      Eigen::MatrixXd sym = p.sys.Tdiag.cwiseInverse().asDiagonal() * p.sys.Mbar[d] *
                            Eigen::MatrixXd(p.sys.Tdiag.asDiagonal());
      sym_res = std::max(sym_res, (sym - sym.transpose()).cwiseAbs().maxCoeff());
    }
    bool sym_pass = sym_res <= 1e-12;
    sections.push_back(
        {{"name", "symmetrizer"}, {"residual", sym_res}, {"pass", sym_pass}});
    overall = overall && sym_pass;

    const bool quadrature_grade = cfg.model == "binary";
    const double jac_tol = quadrature_grade ? 1e-6 : 1e-12;
    if (cfg.model != "none") {
      auto jac = hme::analyze_jacobian(p.qbar, p.sys.Tdiag);
      double dqd = std::max(
          {(p.sys.DbarInv * p.qbar * p.sys.Dbar - p.qbar).cwiseAbs().maxCoeff(),
           (p.qbar * p.sys.DbarInv - p.qbar).cwiseAbs().maxCoeff(),
           (p.sys.Dbar * p.qbar - p.qbar).cwiseAbs().maxCoeff()});
      bool jac_pass = jac.symmetry_residual <= jac_tol &&
                      jac.max_eigenvalue <= jac_tol &&
                      jac.kernel_dim == cfg.dim + 2 && dqd <= 1e-12;
      json section{{"name", "collision_jacobian"},
                   {"symmetry_residual", jac.symmetry_residual},
                   {"max_eigenvalue", jac.max_eigenvalue},
                   {"kernel_dim", jac.kernel_dim},
                   {"dqd_residual", dqd},
                   {"pass", jac_pass}};
      if (cfg.model == "es-bgk") {
        // informational: the displayed closed form disagrees with the
        // recursion on the off-diagonal stress slots
        hme::MomentBasis basis(cfg.dim, cfg.order);
        auto es = hme::qbar_esbgk(basis, cfg.tau, cfg.prandtl);
        section["closed_form_discrepancy"] = es.closed_form_discrepancy;
        section["closed_form_flag"] = es.closed_form_discrepancy > 1e-12;
      }
      sections.push_back(section);
      overall = overall && jac_pass;
    }

    hme::SweepConfig sweep;
    sweep.k_min = cfg.k_min;
    sweep.k_max = cfg.k_max;
    sweep.k_steps = cfg.k_steps;
    sweep.omega_min = cfg.omega_min;
    sweep.omega_max = cfg.omega_max;
    sweep.omega_steps = cfg.omega_steps;
    sweep.log_spacing = true;
    sweep.directions_2d = cfg.directions;
    sweep.seed = cfg.seed;
    sweep.time_tol = cfg.time_tol;
    sweep.space_tol = cfg.space_tol;
    sweep.det_tol = cfg.det_tol;
    auto stability = hme::run_stability_checks(p.sys, p.qbar, cfg.model, sweep);
    json dispersion = report_json(stability);
    dispersion["name"] = "dispersion";
    sections.push_back(dispersion);
    overall = overall && stability.pass();

    auto lemmas = hme::lemma_property_harness(200, 8, cfg.seed);
    sections.push_back({{"name", "lemma_harness"},
                        {"trials", lemmas.trials},
                        {"eigenvalue_violations", lemmas.eigenvalue_violations},
                        {"pencil_violations", lemmas.pencil_violations},
                        {"pass", lemmas.pass()}});
    overall = overall && lemmas.pass();

    if (cfg.model != "none") {
      hme::YongTolerances tol;
      if (quadrature_grade) {
        tol.conserved_tol = 1e-6;
        tol.nsd_rel_tol = 1e-5;
        tol.reconstruction_tol = 1e-5;
      }
      std::mt19937_64 rng(cfg.seed);
      std::vector<hme::Cond2Sample> samples;
      hme::MomentBasis basis(cfg.dim, cfg.order);
      for (int i = 0; i < 20; ++i) {
        auto s = hme::perturbed_equilibrium(basis, cfg.rho0, cfg.theta0, 0.05, rng,
                                            /*zero_velocity=*/true);
        if (p.projection)
          samples.push_back(
              hme::cond2_sample_projected(*p.projection, hme::lift_state(*p.projection, p.projection->Pp * s.w())));
        else
          samples.push_back(hme::cond2_sample(s));
      }
      auto yong = hme::run_yong(p.sys, p.qbar, samples, tol);
      json yong_section = report_json(yong);
      yong_section["name"] = "yong";
      sections.push_back(yong_section);
      overall = overall && yong.overall;
    }

    if (cfg.system == "ohme")
      sections.push_back({{"name", "projection"},
                          {"n_full", p.projection->full.size()},
                          {"n_ordered", p.projection->size()},
                          {"pass", true}});
  }

  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << json{{"schema", 1},
             {"config", config_json(cfg)},
             {"sections", sections},
             {"overall", overall}}
            .dump(2)
     << "\n";
  return overall ? kExitOk : kExitUnstable;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--dim", cfg.dim, "spatial dimension (1-3)");
  cmd->add_option("--order", cfg.order, "moment order M (>= 3)");
  cmd->add_option("--system", cfg.system, "hme | ohme | grad1d");
  cmd->add_option("--model", cfg.model, "bgk | shakhov | es-bgk | binary | none");
  cmd->add_option("--tau", cfg.tau, "relaxation time");
  cmd->add_option("--pr", cfg.prandtl, "Prandtl number");
  cmd->add_option("--b0", cfg.kernel_b0, "binary kernel magnitude");
  cmd->add_option("--nxi", cfg.quad_velocity, "velocity quadrature points per axis");
  cmd->add_option("--nangle", cfg.quad_angle, "angular quadrature points");
  cmd->add_option("--rho0", cfg.rho0, "equilibrium density");
  cmd->add_option("--theta0", cfg.theta0, "equilibrium temperature");
  cmd->add_option("--seed", cfg.seed, "seed for randomized pieces");
  cmd->add_option("--time-tol", cfg.time_tol, "tolerance on min Im(Omega)");
  cmd->add_option("--space-tol", cfg.space_tol, "tolerance on Re(k) Im(k) / |k|^2");
  cmd->add_option("--det-tol", cfg.det_tol, "tolerance on the root residual");
  cmd->add_option("--output", cfg.output, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear stability analysis of hyperbolic moment systems"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* time_cmd =
      app.add_subcommand("dispersion-time", "frequencies over a wave-number sweep");
  add_common_options(time_cmd, cfg);
  time_cmd->add_option("--kmin", cfg.k_min, "smallest wave number");
  time_cmd->add_option("--kmax", cfg.k_max, "largest wave number");
  time_cmd->add_option("--ksteps", cfg.k_steps, "sweep points");
  time_cmd->add_flag("--log", cfg.log_spacing, "logarithmic spacing");

  CLI::App* space_cmd =
      app.add_subcommand("dispersion-space", "wave numbers over a frequency sweep");
  add_common_options(space_cmd, cfg);
  space_cmd->add_option("--omega-min", cfg.omega_min, "smallest frequency");
  space_cmd->add_option("--omega-max", cfg.omega_max, "largest frequency");
  space_cmd->add_option("--omega-steps", cfg.omega_steps, "sweep points");
  space_cmd->add_flag("--log", cfg.log_spacing, "logarithmic spacing");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "structural and stability verification report");
  add_common_options(verify_cmd, cfg);
  verify_cmd->add_option("--kmin", cfg.k_min, "smallest wave number");
  verify_cmd->add_option("--kmax", cfg.k_max, "largest wave number");
  verify_cmd->add_option("--ksteps", cfg.k_steps, "time-sweep points");
  verify_cmd->add_option("--omega-min", cfg.omega_min, "smallest frequency");
  verify_cmd->add_option("--omega-max", cfg.omega_max, "largest frequency");
  verify_cmd->add_option("--omega-steps", cfg.omega_steps, "space-sweep points");
  verify_cmd->add_option("--directions", cfg.directions, "random wave vectors in 2-D/3-D");
  verify_cmd->add_option("--state-file", cfg.state_file,
                         "JSON state overrides for the grad1d contrast");

  try {
    app.parse(argc, argv);
    if (time_cmd->parsed()) return cmd_dispersion_time(cfg);
    if (space_cmd->parsed()) return cmd_dispersion_space(cfg);
    return cmd_verify(cfg);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "state error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
