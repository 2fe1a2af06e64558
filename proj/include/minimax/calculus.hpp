// The potential H = 0.5*|xi|^2, its gradient J'xi, Jacobian-transpose
// products, and the finite-difference oracles used to verify analytic
// derivatives. Everything here is a pure function.
#pragma once

#include "minimax/objectives.hpp"

#include <cstdint>
#include <functional>

namespace minimax {

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;

constexpr double kDefaultFdStep = 1e-5;

// H(p) = 0.5 * |xi(p)|^2. Nonnegative; zero exactly at critical points.
double hamiltonian(const Objective& obj, const Point& p);

// grad H = J(p)' xi(p).
Vector grad_hamiltonian(const Objective& obj, const Point& p);

// J(p)' v using the analytic Jacobian.
Vector apply_jacobian_transpose(const Objective& obj, const Point& p,
                                const Vector& v);

// J(p)' v with J replaced by a central-difference approximation of xi.
// O(h^2) accurate; use the analytic path unless probing for bugs.
Vector apply_jacobian_transpose_fd(const Objective& obj, const Point& p,
                                   const Vector& v, double h = kDefaultFdStep);

// Central difference per coordinate, error O(h^2). h must be > 0.
Vector fd_gradient(const ScalarField& f, const Vector& p,
                   double h = kDefaultFdStep);

// Central difference per column: column j approximates d(field)/dp_j.
Matrix fd_jacobian(const VectorField& field, const Vector& p, Index out_dim,
                   double h = kDefaultFdStep);

struct DerivativeReport {
  double max_rel_error = 0.0;
  Point worst_point;
  bool passed = false;
  double tolerance = 0.0;
};

// Raw evaluators for check_derivatives; lets tests feed in corrupted
// derivatives as negative controls.
struct EvaluatorSet {
  Index d = 1;
  ScalarField g;
  VectorField xi;        // length 2d
  VectorField grad_h;    // length 2d; optional, skipped when empty
  std::function<Matrix(const Vector&)> jacobian;
  std::vector<double> jacobian_kinks;  // coordinates excluded from J checks
};

// Compares analytic xi, J, and grad H against central differences at
// `points` seeded uniform samples from [-5, 5]^{2d}. Relative errors are
// normalized by max(1, |analytic|). Deterministic given the seed.
DerivativeReport check_derivatives(const EvaluatorSet& ev, int points,
                                   std::uint64_t seed, double tol);
DerivativeReport check_derivatives(const Objective& obj, int points,
                                   std::uint64_t seed, double tol);

}  // namespace minimax
