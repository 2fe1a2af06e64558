// One-dimensional C^2 building blocks used by the objective families.
#pragma once

#include "minimax/types.hpp"

namespace minimax {

enum class ScalarFn {
  Identity,        // t
  Quadratic,       // t^2 / 2
  NegQuadratic,    // -t^2 / 2
  Softplus,        // log(1 + e^t), evaluated overflow-free
  PiecewiseCosine  // three-branch cosine spline, see piecewise_cosine()
};

// Value (order 0), first (1) or second (2) derivative of the three-branch
// function
//   -3(t + pi/2)        for t <= -pi/2
//   -3 cos t            for -pi/2 < t <= pi/2
//   -cos t + 2t - pi    for t > pi/2
// which is C^2 with |f''| <= 3 but neither convex nor concave.
double piecewise_cosine(double t, int order);

// Softplus via max(t,0) + log1p(e^{-|t|}); safe for |t| well past 700.
double softplus(double t, int order);

double scalar_eval(ScalarFn fn, double t, int order);

const char* scalar_fn_name(ScalarFn fn);
ScalarFn scalar_fn_from_name(const std::string& name);

// Upper bound on |f''| over all of R (per-player smoothness of the lift).
double scalar_fn_smoothness(ScalarFn fn);

}  // namespace minimax
