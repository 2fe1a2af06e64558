#include "minimax/types.hpp"

namespace minimax {

Point::Point(Vector a, Vector b) : x1(std::move(a)), x2(std::move(b)) {
  if (x1.size() < 1 || x1.size() != x2.size()) {
    throw InputError("Point: players must have equal dimension d >= 1");
  }
  if (!x1.allFinite() || !x2.allFinite()) {
    throw InputError("Point: all components must be finite");
  }
}

Point::Point(double a, double b)
    : Point(Vector::Constant(1, a), Vector::Constant(1, b)) {}

Vector Point::stacked() const {
  Vector v(2 * dim());
  v << x1, x2;
  return v;
}

Point Point::from_stacked(const Vector& v) {
  if (v.size() < 2 || v.size() % 2 != 0) {
    throw InputError("Point: stacked vector must have even length >= 2");
  }
  const Index d = v.size() / 2;
  return Point(v.head(d), v.tail(d));
}

Box::Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() < 1) {
    throw InputError("Box: lo/hi must have equal nonzero dimension");
  }
  if (!lo.allFinite() || !hi.allFinite() || (hi - lo).minCoeff() < 0) {
    throw InputError("Box: requires finite lo <= hi componentwise");
  }
}

Box Box::cube(Index n, double lo, double hi) {
  return Box(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

bool Box::contains(const Vector& v) const {
  return v.size() == lo.size() && (v.array() >= lo.array()).all() &&
         (v.array() <= hi.array()).all();
}

double Box::radius() const {
  return lo.cwiseAbs().cwiseMax(hi.cwiseAbs()).norm();
}

}  // namespace minimax
