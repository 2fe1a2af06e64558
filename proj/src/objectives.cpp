#include "minimax/objectives.hpp"

#include <cmath>

namespace minimax {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

void validate_family(const Family& family, Index d) {
  if (d < 1) throw InputError("Objective: dimension must be >= 1");
  std::visit(
      [d](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) {
          if (fam.C.rows() != d || fam.C.cols() != d) {
            throw InputError("BilinearFamily: C must be d x d");
          }
          if (!fam.C.allFinite()) {
            throw InputError("BilinearFamily: C must be finite");
          }
        } else if constexpr (std::is_same_v<T, QuadraticSaddleFamily>) {
          if (!(fam.c > 0) || !std::isfinite(fam.c)) {
            throw InputError("QuadraticSaddleFamily: c must be > 0");
          }
        } else if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          if (d != 1) throw InputError("CoupledScalarFamily: requires d = 1");
          if (!(fam.c >= 0) || !std::isfinite(fam.c)) {
            throw InputError("CoupledScalarFamily: c must be finite and >= 0");
          }
          if (fam.base != ScalarFn::Softplus &&
              fam.base != ScalarFn::PiecewiseCosine) {
            throw InputError(
                "CoupledScalarFamily: base must be softplus or piecewise_cosine");
          }
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          if (!(fam.c > 0) || !std::isfinite(fam.c)) {
            throw InputError("RegularizedBilinearFamily: c must be > 0");
          }
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          if (d != 1) throw InputError("DiracGanFamily: requires d = 1");
        }
      },
      family);
}

bool uses_piecewise_cosine(const Family& family) {
  return std::visit(
      [](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          return fam.base == ScalarFn::PiecewiseCosine;
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          return fam.f == ScalarFn::PiecewiseCosine ||
                 fam.h == ScalarFn::PiecewiseCosine;
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          return fam.f == ScalarFn::PiecewiseCosine;
        } else {
          return false;
        }
      },
      family);
}

}  // namespace

Objective::Objective(Family family, Index d)
    : family_(std::move(family)), d_(d) {
  validate_family(family_, d_);
}

Objective build_objective(Family family, Index d) {
  return Objective(std::move(family), d);
}

void Objective::require_dim(const Point& p) const {
  if (p.dim() != d_) {
    throw InputError("Objective: point dimension " + std::to_string(p.dim()) +
                     " does not match objective dimension " +
                     std::to_string(d_));
  }
}

double Objective::g(const Point& p) const {
  require_dim(p);
  return std::visit(
      [&](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) {
          return p.x1.dot(fam.C * p.x2);
        } else if constexpr (std::is_same_v<T, QuadraticSaddleFamily>) {
          return 0.5 * fam.c * p.x1.squaredNorm() + p.x1.dot(p.x2) -
                 0.5 * fam.c * p.x2.squaredNorm();
        } else if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          const double a = p.x1[0], b = p.x2[0];
          return scalar_eval(fam.base, a, 0) + fam.c * a * b -
                 scalar_eval(fam.base, b, 0);
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          double s = fam.c * p.x1.dot(p.x2);
          for (Index i = 0; i < p.dim(); ++i) {
            s += scalar_eval(fam.f, p.x1[i], 0) - scalar_eval(fam.h, p.x2[i], 0);
          }
          return s;
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          return scalar_eval(fam.f, p.x1[0] * p.x2[0], 0) -
                 scalar_eval(fam.f, 0.0, 0);
        }
      },
      family_);
}

Vector Objective::xi(const Point& p) const {
  require_dim(p);
  const Index d = d_;
  Vector out(2 * d);
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) {
          out.head(d) = fam.C * p.x2;
          out.tail(d) = -fam.C.transpose() * p.x1;
        } else if constexpr (std::is_same_v<T, QuadraticSaddleFamily>) {
          out.head(d) = fam.c * p.x1 + p.x2;
          out.tail(d) = fam.c * p.x2 - p.x1;
        } else if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          const double a = p.x1[0], b = p.x2[0];
          out[0] = scalar_eval(fam.base, a, 1) + fam.c * b;
          out[1] = scalar_eval(fam.base, b, 1) - fam.c * a;
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          for (Index i = 0; i < d; ++i) {
            out[i] = scalar_eval(fam.f, p.x1[i], 1) + fam.c * p.x2[i];
            out[d + i] = scalar_eval(fam.h, p.x2[i], 1) - fam.c * p.x1[i];
          }
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          const double a = p.x1[0], b = p.x2[0];
          const double d1 = scalar_eval(fam.f, a * b, 1);
          out[0] = d1 * b;
          out[1] = -d1 * a;
        }
      },
      family_);
  return out;
}

Matrix Objective::jacobian(const Point& p) const {
  require_dim(p);
  const Index d = d_;
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) {
          out.topRightCorner(d, d) = fam.C;
          out.bottomLeftCorner(d, d) = -fam.C.transpose();
        } else if constexpr (std::is_same_v<T, QuadraticSaddleFamily>) {
          out.topLeftCorner(d, d) = fam.c * Matrix::Identity(d, d);
          out.topRightCorner(d, d) = Matrix::Identity(d, d);
          out.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
          out.bottomRightCorner(d, d) = fam.c * Matrix::Identity(d, d);
        } else if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          out(0, 0) = scalar_eval(fam.base, p.x1[0], 2);
          out(0, 1) = fam.c;
          out(1, 0) = -fam.c;
          out(1, 1) = scalar_eval(fam.base, p.x2[0], 2);
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          for (Index i = 0; i < d; ++i) {
            out(i, i) = scalar_eval(fam.f, p.x1[i], 2);
            out(i, d + i) = fam.c;
            out(d + i, i) = -fam.c;
            out(d + i, d + i) = scalar_eval(fam.h, p.x2[i], 2);
          }
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          const double a = p.x1[0], b = p.x2[0];
          const double u = a * b;
          const double d1 = scalar_eval(fam.f, u, 1);
          const double d2 = scalar_eval(fam.f, u, 2);
          out(0, 0) = d2 * b * b;
          out(0, 1) = d2 * u + d1;
          out(1, 0) = -(d2 * u + d1);
          out(1, 1) = -d2 * a * a;
        }
      },
      family_);
  return out;
}

std::vector<double> Objective::jacobian_kinks() const {
  if (uses_piecewise_cosine(family_)) return {-kHalfPi, kHalfPi};
  return {};
}

const char* family_name(const Family& family) {
  return std::visit(
      [](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) return "bilinear";
        if constexpr (std::is_same_v<T, QuadraticSaddleFamily>)
          return "quadratic";
        if constexpr (std::is_same_v<T, CoupledScalarFamily>) return "coupled";
        if constexpr (std::is_same_v<T, RegularizedBilinearFamily>)
          return "regularized_bilinear";
        if constexpr (std::is_same_v<T, DiracGanFamily>) return "dirac_gan";
      },
      family);
}

}  // namespace minimax
