#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minimax/calculus.hpp"
#include "minimax/objectives.hpp"

#include <cmath>
#include <random>

using namespace minimax;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

Objective bilinear1() {
  return Objective(BilinearFamily{Matrix::Identity(1, 1)}, 1);
}

std::vector<Objective> shipped_families() {
  std::vector<Objective> objs;
  objs.push_back(bilinear1());
  Matrix C(2, 2);
  C << 1.0, 0.5, -0.25, 2.0;
  objs.push_back(Objective(BilinearFamily{C}, 2));
  objs.push_back(Objective(QuadraticSaddleFamily{1.0}, 1));
  objs.push_back(Objective(QuadraticSaddleFamily{2.5}, 3));
  objs.push_back(Objective(CoupledScalarFamily{ScalarFn::Softplus, 3.0}, 1));
  objs.push_back(
      Objective(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1));
  objs.push_back(Objective(
      RegularizedBilinearFamily{ScalarFn::Softplus, ScalarFn::Quadratic, 3.0},
      2));
  objs.push_back(Objective(DiracGanFamily{ScalarFn::Identity}, 1));
  objs.push_back(Objective(DiracGanFamily{ScalarFn::Softplus}, 1));
  return objs;
}

}  // namespace

TEST_CASE("eval_g on the reference points") {
  CHECK(bilinear1().g(Point(1.0, 2.0)) == doctest::Approx(2.0).epsilon(1e-15));

  Objective soft(CoupledScalarFamily{ScalarFn::Softplus, 3.0}, 1);
  CHECK(soft.g(Point(0.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));

  Objective pwc(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  CHECK(pwc.g(Point(0.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("eval_xi on the reference points") {
  const Vector xi = bilinear1().xi(Point(1.0, 2.0));
  CHECK(xi[0] == doctest::Approx(2.0));
  CHECK(xi[1] == doctest::Approx(-1.0));

  Objective quad(QuadraticSaddleFamily{1.0}, 1);
  CHECK(quad.xi(Point(0.0, 0.0)).norm() == 0.0);

  Objective pwc(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  CHECK(pwc.xi(Point(0.0, 0.0)).norm() == 0.0);  // F'(0) = 0
}

TEST_CASE("eval_jacobian on the reference points") {
  Matrix expected(2, 2);
  expected << 0, 1, -1, 0;
  CHECK((bilinear1().jacobian(Point(1.0, 2.0)) - expected).norm() == 0.0);
  // constant in the evaluation point
  CHECK((bilinear1().jacobian(Point(-3.0, 7.5)) - expected).norm() == 0.0);

  Objective quad(QuadraticSaddleFamily{2.0}, 1);
  expected << 2, 1, -1, 2;
  CHECK((quad.jacobian(Point(0.3, -0.7)) - expected).norm() == 0.0);

  Objective pwc(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  expected << 3, 4, -4, 3;  // F''(0) = 3
  CHECK((pwc.jacobian(Point(0.0, 0.0)) - expected).norm() == 0.0);
}

TEST_CASE("piecewise cosine branch values") {
  CHECK(piecewise_cosine(0.0, 0) == -3.0);
  CHECK(piecewise_cosine(-M_PI, 2) == 0.0);

  // Both branches adjacent to +pi/2 give the same first derivative.
  CHECK(3.0 * std::sin(kHalfPi) == 3.0);
  CHECK(std::sin(kHalfPi) + 2.0 == 3.0);
  CHECK(piecewise_cosine(kHalfPi, 1) == 3.0);

  CHECK_THROWS_AS(piecewise_cosine(0.0, 3), InputError);
}

TEST_CASE("piecewise cosine is C^2 across the breakpoints") {
  // Branch formulas evaluated at the breakpoint itself; agreement is limited
  // only by rounding of cos(pi/2) for the nearest-double breakpoint.
  const double bp = kHalfPi;
  CHECK(std::abs(-3.0 * std::cos(bp) - (-std::cos(bp) + 2.0 * bp - M_PI)) <=
        1e-15);
  CHECK(std::abs(3.0 * std::sin(bp) - (std::sin(bp) + 2.0)) <= 1e-15);
  CHECK(std::abs(3.0 * std::cos(bp) - std::cos(bp)) <= 1e-15);

  CHECK(std::abs(-3.0 * (-bp + bp) - (-3.0 * std::cos(-bp))) <= 1e-15);
  CHECK(std::abs(-3.0 - 3.0 * std::sin(-bp)) <= 1e-15);
  CHECK(std::abs(0.0 - 3.0 * std::cos(-bp)) <= 1e-15);

  // One-sided limits through the evaluator near both breakpoints.
  for (const double b : {-kHalfPi, kHalfPi}) {
    for (const int order : {0, 1, 2}) {
      const double left = piecewise_cosine(b - 1e-9, order);
      const double right = piecewise_cosine(b + 1e-9, order);
      CHECK(std::abs(left - right) <= 1e-8);
    }
  }
}

TEST_CASE("piecewise cosine curvature is bounded by 3") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 20.0 * i / 2000.0;
    CHECK(std::abs(piecewise_cosine(x, 2)) <= 3.0);
  }
}

TEST_CASE("build_objective validates family parameters") {
  CHECK_NOTHROW(build_objective(BilinearFamily{Matrix::Identity(2, 2)}, 2));
  CHECK_NOTHROW(build_objective(CoupledScalarFamily{ScalarFn::Softplus, 10.0}, 1));
  CHECK_NOTHROW(
      build_objective(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 3.0}, 1));

  // shape mismatch
  CHECK_THROWS_AS(build_objective(BilinearFamily{Matrix::Identity(2, 2)}, 3),
                  InputError);
  // nonpositive modulus
  CHECK_THROWS_AS(build_objective(QuadraticSaddleFamily{0.0}, 1), InputError);
  CHECK_THROWS_AS(build_objective(QuadraticSaddleFamily{-1.0}, 1), InputError);
  // scalar families are one-dimensional
  CHECK_THROWS_AS(
      build_objective(CoupledScalarFamily{ScalarFn::Softplus, 1.0}, 2),
      InputError);
  CHECK_THROWS_AS(build_objective(DiracGanFamily{ScalarFn::Identity}, 2),
                  InputError);
  CHECK_THROWS_AS(
      build_objective(CoupledScalarFamily{ScalarFn::Quadratic, 1.0}, 1),
      InputError);
}

TEST_CASE("point construction rejects bad input") {
  CHECK_THROWS_AS(Point(Vector::Zero(2), Vector::Zero(3)), InputError);
  CHECK_THROWS_AS(Point(Vector::Zero(0), Vector::Zero(0)), InputError);
  Vector bad = Vector::Zero(1);
  bad[0] = std::nan("");
  CHECK_THROWS_AS(Point(bad, Vector::Zero(1)), InputError);

  Objective obj = bilinear1();
  CHECK_THROWS_AS(obj.g(Point(Vector::Zero(2), Vector::Zero(2))), InputError);
}

TEST_CASE("analytic xi and J match finite differences on every family") {
  for (const Objective& obj : shipped_families()) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    const auto kinks = obj.jacobian_kinks();

    for (int n = 0; n < 100; ++n) {
      Vector z(2 * obj.dim());
      for (Index i = 0; i < z.size(); ++i) z[i] = unif(rng);
      const Point p = Point::from_stacked(z);

      const auto g_fn = [&](const Vector& y) {
        return obj.g(Point::from_stacked(y));
      };
      const auto xi_fn = [&](const Vector& y) {
        return obj.xi(Point::from_stacked(y));
      };

      Vector fd_xi = fd_gradient(g_fn, z);
      fd_xi.tail(obj.dim()) *= -1.0;
      const Vector xi = obj.xi(p);
      CHECK((fd_xi - xi).norm() / std::max(1.0, xi.norm()) <= 1e-5);

      bool near_kink = false;
      for (Index i = 0; i < z.size(); ++i) {
        for (const double k : kinks) near_kink |= std::abs(z[i] - k) < 1e-3;
      }
      if (!near_kink) {
        const Matrix J = obj.jacobian(p);
        const Matrix fd_J = fd_jacobian(xi_fn, z, 2 * obj.dim());
        CHECK((fd_J - J).norm() / std::max(1.0, J.norm()) <= 1e-4);
      }
    }
  }
}

TEST_CASE("coupled families cancel their base terms on the diagonal") {
  // g(x, x) = c x^2 exactly: the f(x1) and -f(x2) parts cancel.
  for (const ScalarFn base : {ScalarFn::Softplus, ScalarFn::PiecewiseCosine}) {
    const double c = 3.0;
    Objective obj(CoupledScalarFamily{base, c}, 1);
    for (const double x : {-4.2, -1.0, 0.0, 0.5, 2.0, 5.0}) {
      CHECK(obj.g(Point(x, x)) == doctest::Approx(c * x * x).epsilon(1e-14));
    }
  }
}

TEST_CASE("softplus stays finite far outside the working range") {
  CHECK(std::isfinite(softplus(1000.0, 0)));
  CHECK(softplus(1000.0, 0) == doctest::Approx(1000.0));
  CHECK(std::isfinite(softplus(-1000.0, 0)));
  CHECK(softplus(-1000.0, 0) == doctest::Approx(0.0));
  CHECK(softplus(0.0, 0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(0.0, 1) == doctest::Approx(0.5));
  CHECK(softplus(0.0, 2) == doctest::Approx(0.25));
}

TEST_CASE("dirac gan with identity base is the 1x1 bilinear game") {
  Objective gan(DiracGanFamily{ScalarFn::Identity}, 1);
  Objective bil = bilinear1();
  for (const double a : {-2.0, 0.0, 1.5}) {
    for (const double b : {-1.0, 0.25, 3.0}) {
      const Point p(a, b);
      CHECK(gan.g(p) == doctest::Approx(bil.g(p)).epsilon(1e-15));
      CHECK((gan.xi(p) - bil.xi(p)).norm() == 0.0);
      CHECK((gan.jacobian(p) - bil.jacobian(p)).norm() == 0.0);
    }
  }
}
