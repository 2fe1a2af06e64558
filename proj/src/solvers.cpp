#include "minimax/solvers.hpp"

#include <cmath>
#include <random>

namespace minimax {

void SolverConfig::validate() const {
  if (!(eta > 0) || !std::isfinite(eta)) {
    throw InputError("SolverConfig: eta must be > 0");
  }
  if (max_iters < 1) throw InputError("SolverConfig: max_iters must be >= 1");
  if (!(eps_stop >= 0)) throw InputError("SolverConfig: eps_stop must be >= 0");
  if (method == Method::Co) {
    if (!co_gamma) throw InputError("SolverConfig: co_gamma required for co");
    if (!(*co_gamma >= 0) || !std::isfinite(*co_gamma)) {
      throw InputError("SolverConfig: co_gamma must be >= 0");
    }
  } else if (co_gamma) {
    throw InputError("SolverConfig: co_gamma only valid for co");
  }
  if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) {
    throw InputError("SolverConfig: noise_sigma must be >= 0");
  }
  if (schedule.kind == StepSchedule::Kind::Decaying &&
      !(schedule.alpha > 0)) {
    throw InputError("SolverConfig: decaying schedule needs alpha > 0");
  }
}

double GaussianSampler::uniform01() {
  // 53-bit mantissa draw in [0, 1).
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
  // Box-Muller; one fresh pair of uniforms per draw keeps replay trivial.
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * M_PI * u2);
}

Point step_sgda(const Objective& obj, const Point& p, double eta) {
  if (!(eta > 0)) throw InputError("step_sgda: eta must be > 0");
  return Point::from_stacked(p.stacked() - eta * obj.xi(p));
}

Point step_hgd(const Objective& obj, const Point& p, double eta) {
  if (!(eta > 0)) throw InputError("step_hgd: eta must be > 0");
  return Point::from_stacked(p.stacked() - eta * grad_hamiltonian(obj, p));
}

Point step_co(const Objective& obj, const Point& p, double eta,
              double co_gamma) {
  if (!(eta > 0)) throw InputError("step_co: eta must be > 0");
  if (!(co_gamma >= 0)) throw InputError("step_co: co_gamma must be >= 0");
  Vector dir = obj.xi(p);
  if (co_gamma != 0.0) dir += co_gamma * grad_hamiltonian(obj, p);
  return Point::from_stacked(p.stacked() - eta * dir);
}

double schedule_step_size(const StepSchedule& schedule, double eta, int k) {
  if (schedule.kind == StepSchedule::Kind::Constant) return eta;
  const double kk = static_cast<double>(k);
  return (2.0 * kk + 1.0) / (2.0 * schedule.alpha * (kk + 1.0) * (kk + 1.0));
}

Point step_shgd(const Objective& obj, const Point& p, int k,
                const StepSchedule& schedule, double eta, double noise_sigma,
                GaussianSampler& noise, double* estimator_sq_out) {
  Vector v = grad_hamiltonian(obj, p);
  if (noise_sigma != 0.0) {
    for (Index i = 0; i < v.size(); ++i) v[i] += noise_sigma * noise.next();
  }
  if (estimator_sq_out) *estimator_sq_out = v.squaredNorm();
  const double eta_k = schedule_step_size(schedule, eta, k);
  return Point::from_stacked(p.stacked() - eta_k * v);
}

ExtremeEig power_extreme_eig(const Matrix& M, bool largest, int iters,
                             double tol) {
  if (M.rows() != M.cols() || M.rows() < 1) {
    throw InputError("power_extreme_eig: matrix must be square");
  }
  const Index n = M.rows();
  // Shift so the target eigenvalue dominates: for the largest eigenvalue
  // iterate on M + sI, for the smallest on sI - M, with s a Gershgorin-style
  // norm bound.
  const double s = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const Matrix B = largest ? Matrix(M + s * Matrix::Identity(n, n))
                           : Matrix(s * Matrix::Identity(n, n) - M);

  std::mt19937_64 rng(0x5eedu);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  v.normalize();

  double theta = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w = B * v;
    const double wn = w.norm();
    if (wn == 0.0) break;  // v in the kernel of B; theta = 0 is exact
    v = w / wn;
    theta = v.dot(B * v);
  }
  ExtremeEig out;
  out.converged = (B * v - theta * v).norm() <= tol * std::max(1.0, theta);
  out.value = largest ? theta - s : s - theta;
  return out;
}

Point step_signed_hgd(const Objective& obj, const Point& p, double eta,
                      SignRule rule, bool* fallback_out) {
  if (!(eta > 0)) throw InputError("step_signed_hgd: eta must be > 0");
  if (fallback_out) *fallback_out = false;

  const Index d = obj.dim();
  const Matrix J = obj.jacobian(p);
  const Vector xi = obj.xi(p);
  const Vector gh = J.transpose() * xi;

  double sign = 1.0;
  if (rule == SignRule::Alignment) {
    const Matrix A = 0.5 * (J - J.transpose());
    const double s = xi.dot(gh) * (A.transpose() * xi).dot(gh);
    sign = (s < 0.0) ? -1.0 : 1.0;  // sign(0) := +1
  } else {
    constexpr double kTau = 1e-6;
    const Matrix h11 = J.topLeftCorner(d, d);
    const Matrix h22 = -J.bottomRightCorner(d, d);
    const ExtremeEig lo1 = power_extreme_eig(h11, /*largest=*/false);
    const ExtremeEig hi2 = power_extreme_eig(h22, /*largest=*/true);
    if (!lo1.converged || !hi2.converged) {
      if (fallback_out) *fallback_out = true;
      sign = 1.0;
    } else {
      sign = (lo1.value >= -kTau && hi2.value <= kTau) ? 1.0 : -1.0;
    }
  }
  return Point::from_stacked(p.stacked() - (eta * sign) * gh);
}

namespace {

struct Diagnostics {
  double g;
  double grad_norm;
  double hamiltonian;
};

Diagnostics diagnose(const Objective& obj, const Point& p) {
  const Vector xi = obj.xi(p);
  const double gn = xi.norm();
  return {obj.g(p), gn, 0.5 * gn * gn};
}

}  // namespace

Trajectory run(const Objective& obj, const SolverConfig& config,
               const Point& start) {
  config.validate();
  if (start.dim() != obj.dim()) {
    throw InputError("run: start dimension does not match objective");
  }

  GaussianSampler noise(config.seed);
  Trajectory traj;

  auto record = [&](const Point& p, int k) {
    const Diagnostics diag = diagnose(obj, p);
    traj.iterates.push_back(p);
    traj.g.push_back(diag.g);
    traj.grad_norm.push_back(diag.grad_norm);
    traj.hamiltonian.push_back(diag.hamiltonian);
    const double eta_k = config.method == Method::Shgd
                             ? schedule_step_size(config.schedule, config.eta, k)
                             : config.eta;
    traj.step_size.push_back(eta_k);
  };

  record(start, 0);

  for (int k = 0;; ++k) {
    if (traj.grad_norm.back() <= config.eps_stop) {
      traj.terminated_by = Termination::Converged;
      break;
    }
    if (k >= config.max_iters) {
      traj.terminated_by = Termination::MaxIters;
      break;
    }

    const Point& p = traj.iterates.back();
    Vector next;
    switch (config.method) {
      case Method::Sgda:
        next = p.stacked() - config.eta * obj.xi(p);
        break;
      case Method::Hgd:
        next = p.stacked() - config.eta * grad_hamiltonian(obj, p);
        break;
      case Method::Co: {
        Vector dir = obj.xi(p);
        if (*config.co_gamma != 0.0) {
          dir += *config.co_gamma * grad_hamiltonian(obj, p);
        }
        next = p.stacked() - config.eta * dir;
        break;
      }
      case Method::Shgd: {
        double est_sq = 0.0;
        next = step_shgd(obj, p, k, config.schedule, config.eta,
                         config.noise_sigma, noise, &est_sq)
                   .stacked();
        traj.max_estimator_sq = std::max(traj.max_estimator_sq, est_sq);
        break;
      }
      case Method::SignedHgd: {
        bool fell_back = false;
        next = step_signed_hgd(obj, p, config.eta, config.sign_rule, &fell_back)
                   .stacked();
        traj.eig_fallback = traj.eig_fallback || fell_back;
        break;
      }
    }

    if (!next.allFinite()) {
      traj.terminated_by = Termination::Diverged;
      break;
    }
    record(Point::from_stacked(next), k + 1);
    if (next.norm() > kDivergenceNorm) {
      traj.terminated_by = Termination::Diverged;
      break;
    }
  }
  return traj;
}

}  // namespace minimax
