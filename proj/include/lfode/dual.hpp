#pragma once

#include <cmath>

namespace lfode {

/// First-order dual number a + b*eps with eps^2 = 0.
///
/// Used to push a nilpotent flow parameter through the whole jet pipeline:
/// the `dot` part of a computation is its exact t-derivative at t = 0.
struct Dual {
  double val = 0.0;
  double dot = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v) {}  // NOLINT: implicit by design
  constexpr Dual(double v, double d) : val(v), dot(d) {}
};

constexpr Dual operator+(Dual a, Dual b) { return {a.val + b.val, a.dot + b.dot}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.val - b.val, a.dot - b.dot}; }
constexpr Dual operator-(Dual a) { return {-a.val, -a.dot}; }
constexpr Dual operator*(Dual a, Dual b) {
  return {a.val * b.val, a.val * b.dot + a.dot * b.val};
}
constexpr Dual operator/(Dual a, Dual b) {
  const double v = a.val / b.val;
  return {v, (a.dot - v * b.dot) / b.val};
}
constexpr Dual& operator+=(Dual& a, Dual b) { return a = a + b; }
constexpr Dual& operator-=(Dual& a, Dual b) { return a = a - b; }
constexpr Dual& operator*=(Dual& a, Dual b) { return a = a * b; }
constexpr Dual& operator/=(Dual& a, Dual b) { return a = a / b; }
constexpr bool operator==(Dual a, Dual b) { return a.val == b.val && a.dot == b.dot; }

inline Dual exp(Dual x) {
  const double e = std::exp(x.val);
  return {e, x.dot * e};
}
inline Dual log(Dual x) { return {std::log(x.val), x.dot / x.val}; }
inline Dual pow(Dual x, double alpha) {
  const double p = std::pow(x.val, alpha);
  return {p, x.dot * alpha * std::pow(x.val, alpha - 1.0)};
}
inline Dual sqrt(Dual x) {
  const double s = std::sqrt(x.val);
  return {s, x.dot / (2.0 * s)};
}
constexpr Dual abs(Dual x) { return x.val < 0.0 ? -x : x; }

/// Scalar value part, uniform over double and Dual.
constexpr double val_of(double x) { return x; }
constexpr double val_of(Dual x) { return x.val; }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(Dual x) { return std::isfinite(x.val) && std::isfinite(x.dot); }

}  // namespace lfode
