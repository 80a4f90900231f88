#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "lfode/config.hpp"
#include "lfode/dual.hpp"
#include "lfode/errors.hpp"

namespace lfode {

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

}  // namespace detail

/// Truncated Taylor expansion sum_j c_j (x - base)^j with K+1 stored
/// coefficients.
///
/// Every jet also carries a validity watermark: coefficients above
/// `valid_order()` are stored but are truncation artifacts of the operations
/// that produced them (a derivative, say, cannot know the top coefficient).
/// Comparisons and residual checks must clamp to the watermark.
template <class T>
class Jet {
 public:
  Jet() = default;

  Jet(T base, int order) : base_(base), coeffs_(static_cast<size_t>(order) + 1, T{}), valid_(order) {
    if (order < 0) throw Error("jet order must be >= 0");
    check_finite();
  }

  Jet(T base, std::vector<T> coeffs, int valid = -1)
      : base_(base), coeffs_(std::move(coeffs)), valid_(valid) {
    if (coeffs_.empty()) throw Error("jet needs at least one coefficient");
    if (valid_ < 0 || valid_ > order()) valid_ = order();
    check_finite();
  }

  static Jet constant(T value, T base, int order) {
    Jet j(base, order);
    j.coeffs_[0] = value;
    return j;
  }

  /// The coordinate function itself: base + (x - base).
  static Jet variable(T base, int order) {
    if (order < 1) throw Error("variable jet needs order >= 1");
    Jet j(base, order);
    j.coeffs_[0] = base;
    j.coeffs_[1] = T(1.0);
    return j;
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  int valid_order() const noexcept { return valid_; }
  const T& base() const noexcept { return base_; }
  const std::vector<T>& coeffs() const noexcept { return coeffs_; }
  const T& operator[](int j) const { return coeffs_[static_cast<size_t>(j)]; }

  /// Value at the base point.
  const T& value() const { return coeffs_[0]; }

  Jet& clamp_valid(int v) {
    valid_ = std::min(valid_, v);
    return *this;
  }
  Jet& override_valid(int v) {
    valid_ = std::min(v, order());
    return *this;
  }

 private:
  void check_finite() const {
    if (!is_finite(base_)) throw Error("jet base point is not finite");
    for (const T& c : coeffs_)
      if (!is_finite(c)) throw Error("jet coefficient is not finite");
  }

  T base_{};
  std::vector<T> coeffs_;
  int valid_ = -1;
};

namespace detail {

template <class T>
void require_compatible(const Jet<T>& f, const Jet<T>& g) {
  if (f.order() != g.order()) throw OrderMismatch("jets have different truncation orders");
  if (std::abs(val_of(f.base()) - val_of(g.base())) > kDefaultTol)
    throw BaseMismatch("jets have different base points");
}

}  // namespace detail

template <class T>
Jet<T> operator+(const Jet<T>& f, const Jet<T>& g) {
  detail::require_compatible(f, g);
  std::vector<T> c(f.coeffs());
  for (int j = 0; j <= g.order(); ++j) c[j] = c[j] + g[j];
  return Jet<T>(f.base(), std::move(c), std::min(f.valid_order(), g.valid_order()));
}

template <class T>
Jet<T> operator-(const Jet<T>& f, const Jet<T>& g) {
  detail::require_compatible(f, g);
  std::vector<T> c(f.coeffs());
  for (int j = 0; j <= g.order(); ++j) c[j] = c[j] - g[j];
  return Jet<T>(f.base(), std::move(c), std::min(f.valid_order(), g.valid_order()));
}

template <class T>
Jet<T> operator-(const Jet<T>& f) {
  std::vector<T> c(f.coeffs());
  for (T& x : c) x = -x;
  return Jet<T>(f.base(), std::move(c), f.valid_order());
}

/// Cauchy product truncated to the shared order.
template <class T>
Jet<T> operator*(const Jet<T>& f, const Jet<T>& g) {
  detail::require_compatible(f, g);
  const int K = f.order();
  std::vector<T> c(static_cast<size_t>(K) + 1, T{});
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) c[i + j] = c[i + j] + f[i] * g[j];
  return Jet<T>(f.base(), std::move(c), std::min(f.valid_order(), g.valid_order()));
}

template <class T>
Jet<T> operator*(const Jet<T>& f, const std::type_identity_t<T>& s) {
  std::vector<T> c(f.coeffs());
  for (T& x : c) x = x * s;
  return Jet<T>(f.base(), std::move(c), f.valid_order());
}

template <class T>
Jet<T> operator*(const std::type_identity_t<T>& s, const Jet<T>& f) {
  return f * s;
}

template <class T>
Jet<T> operator+(const Jet<T>& f, const std::type_identity_t<T>& s) {
  std::vector<T> c(f.coeffs());
  c[0] = c[0] + s;
  return Jet<T>(f.base(), std::move(c), f.valid_order());
}

template <class T>
Jet<T> operator-(const Jet<T>& f, const std::type_identity_t<T>& s) {
  std::vector<T> c(f.coeffs());
  c[0] = c[0] - s;
  return Jet<T>(f.base(), std::move(c), f.valid_order());
}

/// f / g by the triangular recursion; requires g nonvanishing at the base.
template <class T>
Jet<T> div(const Jet<T>& f, const Jet<T>& g, double reg_tol = kDefaultRegTol) {
  detail::require_compatible(f, g);
  if (std::abs(val_of(g.value())) <= reg_tol)
    throw DivisionBySingular("divisor jet vanishes at the base point");
  const int K = f.order();
  std::vector<T> h(static_cast<size_t>(K) + 1, T{});
  for (int j = 0; j <= K; ++j) {
    T acc = f[j];
    for (int i = 1; i <= j; ++i) acc = acc - g[i] * h[j - i];
    h[j] = acc / g[0];
  }
  return Jet<T>(f.base(), std::move(h), std::min(f.valid_order(), g.valid_order()));
}

/// d/dx. The result has one fewer trustworthy coefficient; the top slot is
/// zero-padded and the watermark dropped accordingly.
template <class T>
Jet<T> derivative(const Jet<T>& f) {
  const int K = f.order();
  std::vector<T> c(static_cast<size_t>(K) + 1, T{});
  for (int j = 0; j < K; ++j) c[j] = T(double(j + 1)) * f[j + 1];
  Jet<T> out(f.base(), std::move(c));
  out.override_valid(std::max(f.valid_order() - 1, -1));
  return out;
}

/// Antiderivative vanishing at the base point.
template <class T>
Jet<T> antiderivative(const Jet<T>& f) {
  const int K = f.order();
  std::vector<T> c(static_cast<size_t>(K) + 1, T{});
  for (int j = 1; j <= K; ++j) c[j] = f[j - 1] / T(double(j));
  Jet<T> out(f.base(), std::move(c));
  out.override_valid(std::min(f.valid_order() + 1, K));
  return out;
}

/// outer(inner(x)) as a jet at inner's base point, by Horner evaluation.
/// inner's value at its base must coincide with outer's base point.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner, double tol = kDefaultTol) {
  if (outer.order() != inner.order())
    throw OrderMismatch("compose: jets have different truncation orders");
  if (std::abs(val_of(inner.value()) - val_of(outer.base())) > tol)
    throw BasePointMismatch("compose: inner value does not match outer base point");
  const int K = outer.order();
  Jet<T> u = inner - outer.base();
  Jet<T> res = Jet<T>::constant(outer[K], inner.base(), K);
  for (int j = K - 1; j >= 0; --j) res = res * u + outer[j];
  res.override_valid(std::min(outer.valid_order(), inner.valid_order()));
  return res;
}

/// Compositional inverse: g with g(f(x)) = x, based at f's value.
template <class T>
Jet<T> reverse(const Jet<T>& f, double reg_tol = kDefaultRegTol) {
  const int K = f.order();
  if (K < 1 || std::abs(val_of(f[1])) <= reg_tol)
    throw NonInvertibleJet("jet has no invertible linear part");
  // powers of the zero-constant part F = f - f(base)
  std::vector<std::vector<T>> Fpow(static_cast<size_t>(K) + 1);
  std::vector<T> F(f.coeffs());
  F[0] = T{};
  Fpow[0].assign(static_cast<size_t>(K) + 1, T{});
  Fpow[0][0] = T(1.0);
  for (int m = 1; m <= K; ++m) {
    Fpow[m].assign(static_cast<size_t>(K) + 1, T{});
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) Fpow[m][i + j] = Fpow[m][i + j] + Fpow[m - 1][i] * F[j];
  }
  std::vector<T> g(static_cast<size_t>(K) + 1, T{});
  g[0] = f.base();
  for (int j = 1; j <= K; ++j) {
    T acc = (j == 1) ? T(1.0) : T{};
    for (int m = 1; m < j; ++m) acc = acc - g[m] * Fpow[m][j];
    g[j] = acc / Fpow[j][j];  // Fpow[j][j] = f_1^j
  }
  Jet<T> out(f[0], std::move(g), f.valid_order());
  // one Newton polish pass knocks the accumulated triangular-solve error
  // down to roundoff: g <- g - (g o f - id) o g
  const Jet<T> residual = compose(out, f) - Jet<T>::variable(f.base(), K);
  out = out - compose(residual, out);
  std::vector<T> polished(out.coeffs());
  polished[0] = f.base();  // the value at f(x0) is exact by construction
  return Jet<T>(f[0], std::move(polished), out.valid_order());
}

template <class T>
Jet<T> exp(const Jet<T>& f) {
  using std::exp;
  const int K = f.order();
  std::vector<T> e(static_cast<size_t>(K) + 1, T{});
  e[0] = exp(f[0]);
  for (int j = 1; j <= K; ++j) {
    T acc{};
    for (int i = 1; i <= j; ++i) acc = acc + T(double(i)) * f[i] * e[j - i];
    e[j] = acc / T(double(j));
  }
  return Jet<T>(f.base(), std::move(e), f.valid_order());
}

template <class T>
Jet<T> log(const Jet<T>& f, double reg_tol = kDefaultRegTol) {
  using std::log;
  if (!(val_of(f.value()) > reg_tol))
    throw NonPositiveConstantTerm("log: constant term must be positive");
  Jet<T> out = antiderivative(div(derivative(f), f, reg_tol));
  return out + log(f[0]);
}

/// f^alpha for real alpha, via exp(alpha * log f).
template <class T>
Jet<T> pow(const Jet<T>& f, double alpha, double reg_tol = kDefaultRegTol) {
  if (!(val_of(f.value()) > reg_tol))
    throw NonPositiveConstantTerm("pow: constant term must be positive");
  return exp(log(f, reg_tol) * T(alpha));
}

template <class T>
Jet<T> nth_root(const Jet<T>& f, int n, double reg_tol = kDefaultRegTol) {
  if (n < 1) throw Error("nth_root: n must be >= 1");
  return pow(f, 1.0 / double(n), reg_tol);
}

/// Re-expand around a new base point (Taylor shift; exact at polynomial
/// level). A nonzero shift folds higher coefficients into lower ones, so the
/// watermark drops by one.
template <class T>
Jet<T> shift_base(const Jet<T>& f, const std::type_identity_t<T>& new_base) {
  const int K = f.order();
  const T delta = new_base - f.base();
  if (delta == T{}) return Jet<T>(new_base, f.coeffs(), f.valid_order());
  std::vector<T> c(f.coeffs());
  // in-place Horner-style Taylor shift
  for (int j = 0; j < K; ++j)
    for (int i = K - 1; i >= j; --i) c[i] = c[i] + delta * c[i + 1];
  Jet<T> out(new_base, std::move(c));
  out.override_valid(std::max(f.valid_order() - 1, -1));
  return out;
}

/// Evaluate the truncated polynomial at base + dx.
template <class T>
T evaluate(const Jet<T>& f, const std::type_identity_t<T>& dx) {
  T acc = f[f.order()];
  for (int j = f.order() - 1; j >= 0; --j) acc = acc * dx + f[j];
  return acc;
}

template <class T>
bool approx_zero(const Jet<T>& f, double tol, int upto = -1) {
  int hi = f.valid_order();
  if (upto >= 0) hi = std::min(hi, upto);
  for (int j = 0; j <= hi; ++j)
    if (std::abs(val_of(f[j])) > tol) return false;
  return true;
}

template <class T>
double max_deviation(const Jet<T>& f, const Jet<T>& g, int upto = -1) {
  int hi = std::min(f.valid_order(), g.valid_order());
  if (upto >= 0) hi = std::min(hi, upto);
  double dev = 0.0;
  for (int j = 0; j <= hi; ++j)
    dev = std::max(dev, std::abs(val_of(f[j]) - val_of(g[j])));
  return dev;
}

}  // namespace lfode
