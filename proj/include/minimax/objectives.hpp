// Two-player objectives with analytic first and second derivatives.
//
// Every family defines g(x1, x2) together with the signed gradient field
//   xi = (dg/dx1, -dg/dx2)
// and its (non-symmetric) Jacobian
//   J = [[ d2g/dx1dx1,  d2g/dx1dx2 ],
//        [-d2g/dx2dx1, -d2g/dx2dx2 ]].
#pragma once

#include "minimax/scalar_functions.hpp"
#include "minimax/types.hpp"

#include <variant>
#include <vector>

namespace minimax {

// g(x1, x2) = x1' C x2, C a d x d matrix. J is constant.
struct BilinearFamily {
  Matrix C;
};

// g = (c/2)|x1|^2 + x1'x2 - (c/2)|x2|^2, c > 0.
// c-strongly convex in x1, c-strongly concave in x2; Hessian blocks constant.
struct QuadraticSaddleFamily {
  double c;
};

// d = 1 only: g = f(x1) + c*x1*x2 - f(x2) with f in {Softplus, PiecewiseCosine}.
// The f-parts cancel on the diagonal, so g(x, x) = c*x^2.
struct CoupledScalarFamily {
  ScalarFn base;
  double c;  // coupling weight, >= 0 (0 decouples the players)
};

// g = sum_i f(x1_i) + c*x1'x2 - sum_i h(x2_i), c > 0.
struct RegularizedBilinearFamily {
  ScalarFn f;
  ScalarFn h;
  double c;
};

// d = 1 only: g = f(x1*x2) - f(0).
struct DiracGanFamily {
  ScalarFn f;
};

using Family = std::variant<BilinearFamily, QuadraticSaddleFamily,
                            CoupledScalarFamily, RegularizedBilinearFamily,
                            DiracGanFamily>;

// Immutable after construction; all evaluators are pure and therefore safe
// for concurrent callers.
class Objective {
 public:
  Objective(Family family, Index d);

  Index dim() const { return d_; }
  const Family& family() const { return family_; }

  double g(const Point& p) const;
  Vector xi(const Point& p) const;      // length 2d
  Matrix jacobian(const Point& p) const;  // 2d x 2d

  // Scalar coordinates where the Jacobian is continuous but not
  // differentiable (finite-difference checks of J degrade near these).
  std::vector<double> jacobian_kinks() const;

 private:
  void require_dim(const Point& p) const;

  Family family_;
  Index d_;
};

Objective build_objective(Family family, Index d);

const char* family_name(const Family& family);

}  // namespace minimax
