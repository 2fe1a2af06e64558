// Experiment harness: flat text configs, CSV trajectory persistence, the
// bundled benchmark presets, coupling-strength sweeps, and EMA tracking.
#pragma once

#include "minimax/solvers.hpp"
#include "minimax/spectral.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minimax {

// Thrown on malformed config text; carries file/line context in what().
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Family family = QuadraticSaddleFamily{1.0};
  Index d = 1;
  SolverConfig solver;
  Point start{Vector::Zero(1), Vector::Zero(1)};
  std::string output_path;
  std::string label;
  std::optional<double> ema_beta;  // in (0, 1) when present

  Objective objective() const { return Objective(family, d); }
};

// Parses the flat key-value format:
//
//   [problem]
//   family = coupled            # bilinear | quadratic | coupled |
//                               # regularized_bilinear | dirac_gan
//   base = softplus             # coupled only
//   c = 10
//   d = 1
//
//   [solver]
//   method = hgd                # sgda | hgd | co | shgd | signed_hgd
//   eta = 0.01
//   max_iters = 150
//   eps_stop = 0
//
//   [run]
//   start = 5 5                 # 2d numbers
//   output = out/run.csv
//   label = demo
//
// Unknown sections or keys are rejected; errors name the offending line.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// Inverse of parse_config (up to formatting); round-trips all fields.
std::string format_config(const ExperimentConfig& config);

struct RunSummary {
  Termination terminated_by = Termination::MaxIters;
  int steps = 0;
  double final_grad_norm = 0.0;
  Point final_point{Vector::Zero(1), Vector::Zero(1)};
};

// One CSV row per iterate with header
//   iter,x1_0..,x2_0..,g,grad_norm,hamiltonian,step_size[,ema_*]
// and 17-significant-digit floats; reruns of the same config are
// byte-identical.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<Vector>& ema);

// EMA of the iterates: e_0 = z_0, e_t = beta * e_{t-1} + (1 - beta) * z_t.
std::vector<Vector> track_ema(const Trajectory& traj, double beta);

// Runs the configured solver, writes the trajectory CSV to
// config.output_path (parent directories are created), returns the summary.
RunSummary run_experiment(const ExperimentConfig& config);

// The full bundled benchmark matrix: {softplus, piecewise-cosine} x
// {c=3, c=10} x {sgda(0.01), hgd(0.01), co(0.1, g=0.1), co(0.01, g=1),
// co(0.001, g=10)}, all starting from (5, 5), with iteration budgets
// 300/150 (sgda, hgd) and 100/15 (co) for c=3/c=10. 20 cells.
std::vector<ExperimentConfig> appendix_h_presets();

// Runs all 20 preset cells into outdir: one <label>.csv trajectory and one
// <label>.cfg config per cell plus a summary.csv. Deterministic; returns
// the summaries in run order.
std::vector<std::pair<std::string, RunSummary>> run_benchmark_suite(
    const std::string& outdir);

struct SweepRow {
  double c = 0.0;
  int iters_to_tol = -1;  // -1 when the tolerance was never reached
  double final_grad_norm = 0.0;
};

// Re-runs `base` (a coupled-scalar problem) for each coupling strength,
// writing one series CSV per c with columns iter,dist_to_minmax,grad_norm
// (distance to the known critical point (0,0)) plus a summary CSV with
// columns c,iters_to_tol,final_grad_norm. Returns the summary rows.
std::vector<SweepRow> sweep_coupling(const ExperimentConfig& base,
                                     const std::vector<double>& c_values,
                                     const std::string& outdir);

const char* method_name(Method method);
const char* termination_name(Termination t);

}  // namespace minimax
