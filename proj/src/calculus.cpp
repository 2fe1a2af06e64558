#include "minimax/calculus.hpp"

#include <cmath>
#include <random>

namespace minimax {

double hamiltonian(const Objective& obj, const Point& p) {
  return 0.5 * obj.xi(p).squaredNorm();
}

Vector grad_hamiltonian(const Objective& obj, const Point& p) {
  return obj.jacobian(p).transpose() * obj.xi(p);
}

Vector apply_jacobian_transpose(const Objective& obj, const Point& p,
                                const Vector& v) {
  if (v.size() != 2 * obj.dim()) {
    throw InputError("apply_jacobian_transpose: v must have length 2d");
  }
  return obj.jacobian(p).transpose() * v;
}

Vector apply_jacobian_transpose_fd(const Objective& obj, const Point& p,
                                   const Vector& v, double h) {
  if (v.size() != 2 * obj.dim()) {
    throw InputError("apply_jacobian_transpose_fd: v must have length 2d");
  }
  const auto field = [&obj](const Vector& z) {
    return obj.xi(Point::from_stacked(z));
  };
  const Matrix J = fd_jacobian(field, p.stacked(), 2 * obj.dim(), h);
  return J.transpose() * v;
}

Vector fd_gradient(const ScalarField& f, const Vector& p, double h) {
  if (!(h > 0)) throw InputError("fd_gradient: step h must be > 0");
  Vector grad(p.size());
  Vector q = p;
  for (Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    q[i] = pi + h;
    const double fp = f(q);
    q[i] = pi - h;
    const double fm = f(q);
    q[i] = pi;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Matrix fd_jacobian(const VectorField& field, const Vector& p, Index out_dim,
                   double h) {
  if (!(h > 0)) throw InputError("fd_jacobian: step h must be > 0");
  Matrix J(out_dim, p.size());
  Vector q = p;
  for (Index j = 0; j < p.size(); ++j) {
    const double pj = p[j];
    q[j] = pj + h;
    const Vector fp = field(q);
    q[j] = pj - h;
    const Vector fm = field(q);
    q[j] = pj;
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

namespace {

double rel_error(const Vector& approx, const Vector& exact) {
  return (approx - exact).norm() / std::max(1.0, exact.norm());
}

bool near_any_kink(const Vector& z, const std::vector<double>& kinks,
                   double margin) {
  for (Index i = 0; i < z.size(); ++i) {
    for (double k : kinks) {
      if (std::abs(z[i] - k) < margin) return true;
    }
  }
  return false;
}

}  // namespace

DerivativeReport check_derivatives(const EvaluatorSet& ev, int points,
                                   std::uint64_t seed, double tol) {
  if (points < 1) throw InputError("check_derivatives: need at least 1 point");
  if (!(tol > 0)) throw InputError("check_derivatives: tolerance must be > 0");

  // The FD model for J is O(h^2) only where J is differentiable; points
  // within 1e-3 of a kink coordinate are excluded from the J comparison.
  constexpr double kKinkMargin = 1e-3;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);

  DerivativeReport report;
  report.tolerance = tol;
  report.worst_point = Point(Vector::Zero(ev.d), Vector::Zero(ev.d));

  for (int n = 0; n < points; ++n) {
    Vector z(2 * ev.d);
    for (Index i = 0; i < z.size(); ++i) z[i] = unif(rng);
    const Point p = Point::from_stacked(z);

    double err = 0.0;

    // xi against the signed FD gradient of g.
    const Vector xi = ev.xi(z);
    Vector fd_xi = fd_gradient(ev.g, z);
    fd_xi.tail(ev.d) *= -1.0;
    err = std::max(err, rel_error(fd_xi, xi));

    // grad H against the FD gradient of H built from xi.
    if (ev.grad_h) {
      const auto h_field = [&ev](const Vector& y) {
        return 0.5 * ev.xi(y).squaredNorm();
      };
      err = std::max(err, rel_error(fd_gradient(h_field, z), ev.grad_h(z)));
    }

    // J against the FD Jacobian of xi.
    if (!near_any_kink(z, ev.jacobian_kinks, kKinkMargin)) {
      const Matrix J = ev.jacobian(z);
      const Matrix fd_J = fd_jacobian(ev.xi, z, 2 * ev.d);
      const double jerr = (fd_J - J).norm() / std::max(1.0, J.norm());
      err = std::max(err, jerr);
    }

    if (err > report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_point = p;
    }
  }
  report.passed = report.max_rel_error <= tol;
  return report;
}

DerivativeReport check_derivatives(const Objective& obj, int points,
                                   std::uint64_t seed, double tol) {
  EvaluatorSet ev;
  ev.d = obj.dim();
  ev.g = [&obj](const Vector& z) { return obj.g(Point::from_stacked(z)); };
  ev.xi = [&obj](const Vector& z) { return obj.xi(Point::from_stacked(z)); };
  ev.grad_h = [&obj](const Vector& z) {
    return grad_hamiltonian(obj, Point::from_stacked(z));
  };
  ev.jacobian = [&obj](const Vector& z) {
    return obj.jacobian(Point::from_stacked(z));
  };
  ev.jacobian_kinks = obj.jacobian_kinks();
  return check_derivatives(ev, points, seed, tol);
}

}  // namespace minimax
