// Command-line front end: run experiments from config files, regenerate the
// bundled benchmark matrix, certify convergence constants, check analytic
// derivatives, and sweep coupling strengths.
#include <CLI11.hpp>

#include "minimax/harness.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

using namespace minimax;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print_summary(const ExperimentConfig& cfg, const RunSummary& s) {
  std::cout << "RUN label=" << cfg.label << " family=" << family_name(cfg.family)
            << " method=" << method_name(cfg.solver.method)
            << " terminated=" << termination_name(s.terminated_by)
            << " steps=" << s.steps
            << " final_grad_norm=" << fmt(s.final_grad_norm)
            << " output=" << cfg.output_path << "\n";
}

int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = load_config(config_path);
  if (cfg.output_path.empty()) {
    throw ConfigError(config_path + ": [run] output is required for 'run'");
  }
  print_summary(cfg, run_experiment(cfg));
  return 0;
}

int cmd_repro(const std::string& outdir) {
  for (const auto& [label, s] : run_benchmark_suite(outdir)) {
    std::cout << "RUN label=" << label
              << " terminated=" << termination_name(s.terminated_by)
              << " steps=" << s.steps
              << " final_grad_norm=" << fmt(s.final_grad_norm) << "\n";
  }
  std::cout << "wrote 20 trajectories + configs + summary.csv to " << outdir
            << "\n";
  return 0;
}

int cmd_checkgrad(const std::string& config_path, int points,
                  std::uint64_t seed, double tol) {
  const ExperimentConfig cfg = load_config(config_path);
  const Objective obj = cfg.objective();
  const DerivativeReport rep = check_derivatives(obj, points, seed, tol);
  std::cout << "derivative check: " << family_name(cfg.family)
            << " (d=" << cfg.d << ")\n"
            << "  points sampled : " << points << " (seed " << seed << ")\n"
            << "  max rel error  : " << fmt(rep.max_rel_error) << "\n"
            << "  tolerance      : " << fmt(rep.tolerance) << "\n"
            << "  worst point    : x1=" << rep.worst_point.x1.transpose()
            << " x2=" << rep.worst_point.x2.transpose() << "\n"
            << "  verdict        : " << (rep.passed ? "pass" : "FAIL") << "\n";
  std::cout << "CHECKGRAD family=" << family_name(cfg.family) << " d=" << cfg.d
            << " points=" << points << " seed=" << seed
            << " tol=" << fmt(tol)
            << " max_rel_error=" << fmt(rep.max_rel_error)
            << " passed=" << (rep.passed ? 1 : 0) << "\n";
  return 0;
}

int cmd_certify(const std::string& config_path, double lo, double hi, int res,
                int samples, std::uint64_t seed, const std::string& regime_arg) {
  const ExperimentConfig cfg = load_config(config_path);
  const Objective obj = cfg.objective();
  const Box region = Box::cube(2 * cfg.d, lo, hi);

  const bool constant_j =
      std::holds_alternative<BilinearFamily>(cfg.family) ||
      std::holds_alternative<QuadraticSaddleFamily>(cfg.family);
  SpectralProfile prof = constant_j
                             ? analytic_profile(obj, region)
                             : estimate_profile(obj, region, samples, seed);
  const double l_h = prof.smoothness_h();
  const BilinearityCheck cond = check_sufficiently_bilinear(prof);

  const int grid_res = constant_j ? 2 : res;
  if (std::pow(static_cast<double>(grid_res), static_cast<double>(2 * cfg.d)) >
      2e6) {
    throw InputError("certify: grid too large; lower --res");
  }
  const GridCertificate grid = min_eig_jjt(obj, region, grid_res);

  Regime regime = EmpiricalRegime{grid.alpha_hat};
  std::string requested = regime_arg;
  if (requested == "auto") {
    if (const auto* q = std::get_if<QuadraticSaddleFamily>(&cfg.family)) {
      regime = ScscRegime{q->c};
    } else if (std::holds_alternative<BilinearFamily>(cfg.family)) {
      regime = NonconvexLinearRegime{};
    } else if (cond.holds) {
      regime = SufficientlyBilinearRegime{};
    }
  } else if (requested == "scsc") {
    const auto* q = std::get_if<QuadraticSaddleFamily>(&cfg.family);
    if (!q) throw InputError("certify: scsc regime needs the quadratic family");
    regime = ScscRegime{q->c};
  } else if (requested == "nonconvex_linear") {
    regime = NonconvexLinearRegime{};
  } else if (requested == "sufficiently_bilinear") {
    regime = SufficientlyBilinearRegime{};
  } else if (requested != "empirical") {
    throw InputError("certify: unknown regime '" + requested + "'");
  }

  std::cout << "certificate report: " << family_name(cfg.family)
            << " (d=" << cfg.d << ") over [" << fmt(lo) << ", " << fmt(hi)
            << "]^" << 2 * cfg.d << "\n"
            << "  constants      : L=" << fmt(prof.L)
            << " gamma=" << fmt(prof.gamma) << " Gamma=" << fmt(prof.Gamma)
            << " rho2=" << fmt(prof.rho2) << " mu2=" << fmt(prof.mu2) << "\n"
            << "  lipschitz      : L1=" << fmt(prof.L1)
            << " L2=" << fmt(prof.L2) << " L3=" << fmt(prof.L3)
            << " L_H=" << fmt(l_h)
            << (prof.L_g ? " L_g=" + fmt(*prof.L_g) : std::string()) << "\n"
            << "  condition      : margin=" << fmt(cond.margin)
            << " alt_margin=" << fmt(cond.alt_margin)
            << " holds=" << (cond.holds ? 1 : 0) << "\n"
            << "  grid floor     : alpha_hat=" << fmt(grid.alpha_hat)
            << " (res " << grid.resolution << " per axis)\n";

  try {
    const PlCertificate cert = pl_parameter(prof, regime);
    const RatePrediction rate = predict_rate(cert, l_h);
    std::cout << "  regime         : " << regime_name(cert.regime) << "\n"
              << "  alpha          : " << fmt(cert.alpha) << "\n"
              << "  contraction    : " << fmt(cert.contraction)
              << " per step on H (|xi| factor " << fmt(rate.xi_factor)
              << ")\n";
    if (prof.L_g) {
      const CoParameters co = co_parameters(cert.alpha, l_h, *prof.L_g);
      std::cout << "  consensus      : eta=" << fmt(co.eta)
                << " co_gamma=" << fmt(co.co_gamma)
                << " rate=" << fmt(co.rate) << "\n";
    }
    std::cout << "CERTIFY family=" << family_name(cfg.family) << " d=" << cfg.d
              << " regime=" << regime_name(cert.regime)
              << " alpha=" << fmt(cert.alpha) << " L_H=" << fmt(l_h)
              << " contraction=" << fmt(cert.contraction)
              << " margin=" << fmt(cond.margin)
              << " alt_margin=" << fmt(cond.alt_margin)
              << " alpha_hat=" << fmt(grid.alpha_hat) << " lo=" << fmt(lo)
              << " hi=" << fmt(hi) << " res=" << grid.resolution << "\n";
  } catch (const CertificationError& e) {
    std::cout << "  regime         : refused (" << e.what() << ")\n";
    std::cout << "CERTIFY family=" << family_name(cfg.family) << " d=" << cfg.d
              << " regime=refused margin=" << fmt(cond.margin)
              << " alt_margin=" << fmt(cond.alt_margin)
              << " alpha_hat=" << fmt(grid.alpha_hat) << " lo=" << fmt(lo)
              << " hi=" << fmt(hi) << " res=" << grid.resolution << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& cs,
              const std::string& outdir) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto rows = sweep_coupling(cfg, cs, outdir);
  std::cout << "c,iters_to_tol,final_grad_norm\n";
  for (const SweepRow& row : rows) {
    std::cout << fmt(row.c) << "," << row.iters_to_tol << ","
              << fmt(row.final_grad_norm) << "\n";
  }
  std::cout << "series written to " << outdir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-max optimization dynamics and certification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir = "appendix_h_out";
  int points = 100;
  std::uint64_t seed = 7;
  double tol = 1e-4;
  double lo = -5.0, hi = 5.0;
  int res = 41;
  int samples = 4096;
  std::string regime = "auto";
  std::vector<double> cs;
  std::string sweep_outdir = "sweep_out";

  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", config_path, "config file")->required();

  auto* repro_cmd = app.add_subcommand(
      "repro-appendix-h", "regenerate the bundled 20-cell benchmark matrix");
  repro_cmd->add_option("--outdir", outdir, "output directory");

  auto* grad_cmd =
      app.add_subcommand("checkgrad", "verify analytic derivatives against "
                                      "central differences");
  grad_cmd->add_option("config", config_path, "config file")->required();
  grad_cmd->add_option("--points", points, "number of sample points");
  grad_cmd->add_option("--seed", seed, "sampling seed");
  grad_cmd->add_option("--tol", tol, "relative tolerance");

  auto* cert_cmd = app.add_subcommand(
      "certify", "compute convergence constants and a PL certificate");
  cert_cmd->add_option("config", config_path, "config file")->required();
  cert_cmd->add_option("--lo", lo, "region lower bound (all axes)");
  cert_cmd->add_option("--hi", hi, "region upper bound (all axes)");
  cert_cmd->add_option("--res", res, "grid resolution per axis");
  cert_cmd->add_option("--samples", samples, "profile sample count");
  cert_cmd->add_option("--seed", seed, "profile sampling seed");
  cert_cmd->add_option("--regime", regime,
                       "auto | scsc | nonconvex_linear | "
                       "sufficiently_bilinear | empirical");

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "re-run a coupled problem across coupling strengths");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_cmd->add_option("--c", cs, "coupling strengths")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--outdir", sweep_outdir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (repro_cmd->parsed()) return cmd_repro(outdir);
    if (grad_cmd->parsed()) return cmd_checkgrad(config_path, points, seed, tol);
    if (cert_cmd->parsed())
      return cmd_certify(config_path, lo, hi, res, samples, seed, regime);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, cs, sweep_outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
