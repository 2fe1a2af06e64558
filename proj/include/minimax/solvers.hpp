// Iterative dynamics on two-player objectives: simultaneous descent/ascent,
// gradient descent on H, consensus updates, a stochastic variant of descent
// on H, and sign-adjusted descent on H. One driver runs them all with a
// shared stopping rule.
#pragma once

#include "minimax/calculus.hpp"
#include "minimax/objectives.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace minimax {

enum class Method { Sgda, Hgd, Co, Shgd, SignedHgd };

enum class Termination { Converged, MaxIters, Diverged };

enum class SignRule {
  // sign(<xi, grad H> * <A' xi, grad H>) with A the antisymmetric part of J;
  // sign(0) is taken as +1.
  Alignment,
  // +1 iff power iteration certifies the x1-block of the Hessian is
  // (tau-approximately) positive semidefinite and the x2-block negative
  // semidefinite, else -1.
  BlockEig
};

struct StepSchedule {
  enum class Kind { Constant, Decaying } kind = Kind::Constant;
  // Decaying: eta_k = (2k+1) / (2 * alpha * (k+1)^2).
  double alpha = 1.0;
};

struct SolverConfig {
  Method method = Method::Hgd;
  double eta = 0.01;
  std::optional<double> co_gamma;  // required iff method == Co
  int max_iters = 10000;
  double eps_stop = 1e-6;
  std::uint64_t seed = 0;         // Shgd only
  double noise_sigma = 0.0;       // Shgd only; per-coordinate Gaussian scale
  StepSchedule schedule;          // Shgd only
  SignRule sign_rule = SignRule::Alignment;  // SignedHgd only

  void validate() const;
};

struct Trajectory {
  std::vector<Point> iterates;
  // Per-iterate diagnostics, same length as iterates.
  std::vector<double> g;
  std::vector<double> grad_norm;  // |xi|
  std::vector<double> hamiltonian;
  // step_size[k] is the step size the method uses at iterate k (for the
  // final iterate: the size the next step would have used).
  std::vector<double> step_size;
  Termination terminated_by = Termination::MaxIters;
  // Shgd: largest |grad H + noise|^2 seen along the run (empirical second
  // moment witness for the estimator bound).
  double max_estimator_sq = 0.0;
  // SignedHgd/BlockEig: set when power iteration failed to converge and the
  // step fell back to plain descent on H.
  bool eig_fallback = false;

  int steps_taken() const { return static_cast<int>(iterates.size()) - 1; }
};

// Deterministic Gaussian stream: explicit Box-Muller over mt19937_64 output,
// so byte-identical replay does not depend on the standard library's
// distribution internals.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  double uniform01();
  std::mt19937_64 rng_;
};

// Single updates. Each returns p - eta * (direction); divergence handling
// lives in run().
Point step_sgda(const Objective& obj, const Point& p, double eta);
Point step_hgd(const Objective& obj, const Point& p, double eta);
Point step_co(const Objective& obj, const Point& p, double eta,
              double co_gamma);

double schedule_step_size(const StepSchedule& schedule, double eta, int k);

// v = grad H + noise_sigma * z with z standard Gaussian per coordinate.
// Writes |v|^2 to estimator_sq_out when non-null.
Point step_shgd(const Objective& obj, const Point& p, int k,
                const StepSchedule& schedule, double eta, double noise_sigma,
                GaussianSampler& noise, double* estimator_sq_out = nullptr);

Point step_signed_hgd(const Objective& obj, const Point& p, double eta,
                      SignRule rule, bool* fallback_out = nullptr);

// Largest or smallest eigenvalue of a symmetric matrix by shifted power
// iteration with a fixed budget (64 iterations, residual tolerance 1e-6,
// seeded start vector).
struct ExtremeEig {
  double value = 0.0;
  bool converged = false;
};
ExtremeEig power_extreme_eig(const Matrix& M, bool largest, int iters = 64,
                             double tol = 1e-6);

// Runs the configured method from `start` until |xi| <= eps_stop
// (Converged), the iterate norm exceeds 1e8 or goes non-finite (Diverged),
// or max_iters steps (MaxIters). Bitwise deterministic given config, start,
// and seed.
Trajectory run(const Objective& obj, const SolverConfig& config,
               const Point& start);

constexpr double kDivergenceNorm = 1e8;

}  // namespace minimax
