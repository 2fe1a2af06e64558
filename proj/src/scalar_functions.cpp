#include "minimax/scalar_functions.hpp"

#include <cmath>

namespace minimax {

namespace {
constexpr double kHalfPi = 1.5707963267948966;

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

[[noreturn]] void bad_order(int order) {
  throw InputError("scalar function derivative order must be 0, 1, or 2; got " +
                   std::to_string(order));
}
}  // namespace

double piecewise_cosine(double t, int order) {
  switch (order) {
    case 0:
      if (t <= -kHalfPi) return -3.0 * (t + kHalfPi);
      if (t <= kHalfPi) return -3.0 * std::cos(t);
      return -std::cos(t) + 2.0 * t - 2.0 * kHalfPi;
    case 1:
      if (t <= -kHalfPi) return -3.0;
      if (t <= kHalfPi) return 3.0 * std::sin(t);
      return std::sin(t) + 2.0;
    case 2:
      if (t <= -kHalfPi) return 0.0;
      if (t <= kHalfPi) return 3.0 * std::cos(t);
      return std::cos(t);
    default:
      bad_order(order);
  }
}

double softplus(double t, int order) {
  switch (order) {
    case 0:
      return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
    case 1:
      return sigmoid(t);
    case 2: {
      const double s = sigmoid(t);
      return s * (1.0 - s);
    }
    default:
      bad_order(order);
  }
}

double scalar_eval(ScalarFn fn, double t, int order) {
  switch (fn) {
    case ScalarFn::Identity:
      if (order == 0) return t;
      if (order == 1) return 1.0;
      if (order == 2) return 0.0;
      bad_order(order);
    case ScalarFn::Quadratic:
      if (order == 0) return 0.5 * t * t;
      if (order == 1) return t;
      if (order == 2) return 1.0;
      bad_order(order);
    case ScalarFn::NegQuadratic:
      if (order == 0) return -0.5 * t * t;
      if (order == 1) return -t;
      if (order == 2) return -1.0;
      bad_order(order);
    case ScalarFn::Softplus:
      return softplus(t, order);
    case ScalarFn::PiecewiseCosine:
      return piecewise_cosine(t, order);
  }
  throw InputError("unknown scalar function");
}

const char* scalar_fn_name(ScalarFn fn) {
  switch (fn) {
    case ScalarFn::Identity: return "identity";
    case ScalarFn::Quadratic: return "quadratic";
    case ScalarFn::NegQuadratic: return "neg_quadratic";
    case ScalarFn::Softplus: return "softplus";
    case ScalarFn::PiecewiseCosine: return "piecewise_cosine";
  }
  return "?";
}

ScalarFn scalar_fn_from_name(const std::string& name) {
  if (name == "identity") return ScalarFn::Identity;
  if (name == "quadratic") return ScalarFn::Quadratic;
  if (name == "neg_quadratic") return ScalarFn::NegQuadratic;
  if (name == "softplus") return ScalarFn::Softplus;
  if (name == "piecewise_cosine") return ScalarFn::PiecewiseCosine;
  throw InputError("unknown scalar function name: " + name);
}

double scalar_fn_smoothness(ScalarFn fn) {
  switch (fn) {
    case ScalarFn::Identity: return 0.0;
    case ScalarFn::Quadratic: return 1.0;
    case ScalarFn::NegQuadratic: return 1.0;
    case ScalarFn::Softplus: return 0.25;
    case ScalarFn::PiecewiseCosine: return 3.0;
  }
  return 0.0;
}

}  // namespace minimax
