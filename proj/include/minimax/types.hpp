// Core vocabulary types shared across the library.
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace minimax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown on malformed inputs (dimension mismatches, non-finite values,
// out-of-range parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a certificate's hypothesis fails; carries the violated margin.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

// A pair of player variables of equal dimension d >= 1, all entries finite.
struct Point {
  Vector x1;
  Vector x2;

  Point() = default;
  Point(Vector a, Vector b);
  Point(double a, double b);  // d = 1 convenience

  Index dim() const { return x1.size(); }

  // Concatenation (x1, x2) as one length-2d vector.
  Vector stacked() const;
  static Point from_stacked(const Vector& v);
};

// Axis-aligned box in R^n, lo <= hi componentwise.
struct Box {
  Vector lo;
  Vector hi;

  Box(Vector lo_, Vector hi_);
  static Box cube(Index n, double lo, double hi);

  Index dim() const { return lo.size(); }
  bool contains(const Vector& v) const;
  // Largest Euclidean norm attained on the box.
  double radius() const;
};

}  // namespace minimax
