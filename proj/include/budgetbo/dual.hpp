#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace budgetbo {

// Forward-mode dual number carrying a dense gradient.  The tree acquisition
// and the closed-form acquisitions are evaluated on Dual to obtain exact
// derivatives with respect to the decision points; branch decisions
// (budget pruning, incumbent max) are taken on .val, so indicators act as
// constants within one evaluation.
struct Dual {
  double val = 0.0;
  Eigen::VectorXd grad;

  Dual() = default;
  Dual(double v, Eigen::VectorXd g) : val(v), grad(std::move(g)) {}

  static Dual constant(double v, int nvars) { return Dual(v, Eigen::VectorXd::Zero(nvars)); }
  static Dual variable(double v, int nvars, int index) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nvars);
    g[index] = 1.0;
    return Dual(v, std::move(g));
  }
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.grad + b.grad}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.grad - b.grad}; }
inline Dual operator-(const Dual& a) { return {-a.val, -a.grad}; }
inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.val * b.val, a.val * b.grad + b.val * a.grad};
}
inline Dual operator/(const Dual& a, const Dual& b) {
  const double inv = 1.0 / b.val;
  return {a.val * inv, inv * a.grad - (a.val * inv * inv) * b.grad};
}

inline Dual operator+(const Dual& a, double b) { return {a.val + b, a.grad}; }
inline Dual operator+(double a, const Dual& b) { return {a + b.val, b.grad}; }
inline Dual operator-(const Dual& a, double b) { return {a.val - b, a.grad}; }
inline Dual operator-(double a, const Dual& b) { return {a - b.val, -b.grad}; }
inline Dual operator*(const Dual& a, double b) { return {a.val * b, a.grad * b}; }
inline Dual operator*(double a, const Dual& b) { return {a * b.val, a * b.grad}; }
inline Dual operator/(const Dual& a, double b) { return {a.val / b, a.grad / b}; }
inline Dual operator/(double a, const Dual& b) {
  const double inv = 1.0 / b.val;
  return {a * inv, (-a * inv * inv) * b.grad};
}

inline Dual& operator+=(Dual& a, const Dual& b) {
  a.val += b.val;
  a.grad += b.grad;
  return a;
}
inline Dual& operator-=(Dual& a, const Dual& b) {
  a.val -= b.val;
  a.grad -= b.grad;
  return a;
}

inline Dual sqrt(const Dual& a) {
  const double r = std::sqrt(a.val);
  return {r, a.grad / (2.0 * r)};
}
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.val);
  return {e, e * a.grad};
}
inline Dual log(const Dual& a) { return {std::log(a.val), a.grad / a.val}; }
inline Dual erfc(const Dual& a) {
  constexpr double two_over_sqrt_pi = 1.1283791670955125738961589031215;
  return {std::erfc(a.val), (-two_over_sqrt_pi * std::exp(-a.val * a.val)) * a.grad};
}

inline Dual max(const Dual& a, const Dual& b) { return a.val >= b.val ? a : b; }

// Scalar-type shims so numeric code templates over double and Dual alike.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.val; }

using std::erfc;
using std::exp;
using std::log;
using std::sqrt;
inline double max(double a, double b) { return a >= b ? a : b; }

}  // namespace budgetbo
