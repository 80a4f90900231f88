#pragma once

#include <utility>
#include <vector>

#include "lfode/jet.hpp"

namespace lfode {

/// Linear ordinary differential operator a_n D^n + ... + a_1 D + a_0 with
/// jet coefficients sharing one base point and truncation order. The leading
/// coefficient must not vanish at the base point.
template <class T>
struct LinearOperator {
  std::vector<Jet<T>> coeffs;  // a_0 .. a_n

  LinearOperator() = default;
  explicit LinearOperator(std::vector<Jet<T>> c, double reg_tol = kDefaultRegTol)
      : coeffs(std::move(c)) {
    if (coeffs.size() < 2) throw OrderTooLow("operator order must be >= 1");
    for (const auto& a : coeffs) detail::require_compatible(coeffs.front(), a);
    if (std::abs(val_of(leading().value())) <= reg_tol)
      throw SingularLeadingCoefficient("leading coefficient vanishes at the base point");
  }

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  int jet_order() const { return coeffs.front().order(); }
  const T& base() const { return coeffs.front().base(); }
  const Jet<T>& leading() const { return coeffs.back(); }

  int valid_order() const {
    int v = jet_order();
    for (const auto& a : coeffs) v = std::min(v, a.valid_order());
    return v;
  }
};

/// The data of a point/projective change of variables: new independent
/// variable phi, dependent-variable rescaling psi, overall projective factor
/// rho (identically 1 for pure gauge equivalence).
template <class T>
struct GaugeTransform {
  Jet<T> phi, psi, rho;

  static GaugeTransform identity(const T& base, int order) {
    return {Jet<T>::variable(base, order), Jet<T>::constant(T(1.0), base, order),
            Jet<T>::constant(T(1.0), base, order)};
  }
};

/// sum_k a_k y^(k), valid to roughly K - n.
template <class T>
Jet<T> apply(const LinearOperator<T>& D, const Jet<T>& y) {
  detail::require_compatible(D.coeffs.front(), y);
  Jet<T> yk = y;
  Jet<T> acc = D.coeffs[0] * y;
  for (int k = 1; k <= D.order(); ++k) {
    yk = derivative(yk);
    acc = acc + D.coeffs[k] * yk;
  }
  return acc;
}

namespace detail {

/// Rewrite sum_j c_j D_x^j as sum_m e_m D_xbar^m for xbar = phi(x), with the
/// e_m still expressed as jets in x. Uses the operator identity
/// D_x = phi' D_xbar, expanded by the recursion
/// gamma_{j,m} = gamma_{j-1,m}' + phi' gamma_{j-1,m-1}.
template <class T>
std::vector<Jet<T>> rewrite_derivatives(const std::vector<Jet<T>>& c, const Jet<T>& phi,
                                        double reg_tol) {
  const Jet<T> phip = derivative(phi);
  if (std::abs(val_of(phip.value())) <= reg_tol)
    throw NonInvertibleJet("change of variable has phi'(x0) ~ 0");
  const int n = static_cast<int>(c.size()) - 1;
  const T base = phi.base();
  const int K = phi.order();
  const Jet<T> zero(base, K);
  const Jet<T> one = Jet<T>::constant(T(1.0), base, K);

  std::vector<Jet<T>> e(static_cast<size_t>(n) + 1, zero);
  std::vector<Jet<T>> gamma{one};  // expansion of D_x^j, j = 0 to start
  e[0] = e[0] + c[0];
  for (int j = 1; j <= n; ++j) {
    std::vector<Jet<T>> next(static_cast<size_t>(j) + 1, zero);
    for (int m = 0; m < j; ++m) next[m] = next[m] + derivative(gamma[m]);
    for (int m = 1; m <= j; ++m) next[m] = next[m] + phip * gamma[m - 1];
    gamma = std::move(next);
    for (int m = 0; m <= j; ++m) e[m] = e[m] + c[j] * gamma[m];
  }
  return e;
}

}  // namespace detail

/// The operator rewritten in powers of D_xbar, coefficients still jets in x
/// (no recentering).
template <class T>
LinearOperator<T> change_variable(const LinearOperator<T>& D, const Jet<T>& phi,
                                  double reg_tol = kDefaultRegTol) {
  detail::require_compatible(D.coeffs.front(), phi);
  return LinearOperator<T>(detail::rewrite_derivatives(D.coeffs, phi, reg_tol), reg_tol);
}

/// Conjugated operator rho . psi . D . (1/psi) rewritten in xbar = phi(x) and
/// recentered at phi(x0) by composing the coefficients with the reversion of
/// phi. Satisfies, to the truncation watermark,
///   apply(Dbar, (psi y) o phi^-1) = (rho psi apply(D, y)) o phi^-1.
template <class T>
LinearOperator<T> conjugate(const LinearOperator<T>& D, const GaugeTransform<T>& tr,
                            double tol = kDefaultTol, double reg_tol = kDefaultRegTol) {
  const int n = D.order();
  const int K = D.jet_order();
  const T base = D.base();
  const Jet<T> one = Jet<T>::constant(T(1.0), base, K);

  // derivatives of 1/psi for the Leibniz expansion of D o (1/psi)
  std::vector<Jet<T>> winv{div(one, tr.psi, reg_tol)};
  for (int s = 1; s <= n; ++s) winv.push_back(derivative(winv.back()));

  const Jet<T> scale = tr.rho * tr.psi;
  std::vector<Jet<T>> c;
  c.reserve(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    Jet<T> acc(base, K);
    for (int k = j; k <= n; ++k)
      acc = acc + T(detail::binomial(k, j)) * (D.coeffs[k] * winv[k - j]);
    c.push_back(scale * acc);
  }

  std::vector<Jet<T>> e = detail::rewrite_derivatives(c, tr.phi, reg_tol);
  const Jet<T> rev = reverse(tr.phi, reg_tol);
  for (auto& em : e) em = compose(em, rev, tol);
  return LinearOperator<T>(std::move(e), reg_tol);
}

/// Laguerre-Forsyth form: monic with vanishing a_{n-1} and a_{n-2}.
template <class T>
bool is_lf_form(const LinearOperator<T>& D, double tol = kDefaultTol) {
  const int n = D.order();
  if (n < 3) throw OrderTooLow("Laguerre-Forsyth form needs order >= 3");
  const Jet<T> one = Jet<T>::constant(T(1.0), D.base(), D.jet_order());
  return approx_zero(D.coeffs[n] - one, tol) && approx_zero(D.coeffs[n - 1], tol) &&
         approx_zero(D.coeffs[n - 2], tol);
}

/// Composite transform applying t1 first, then t2.
template <class T>
GaugeTransform<T> compose_transforms(const GaugeTransform<T>& t2, const GaugeTransform<T>& t1,
                                     double tol = kDefaultTol, double reg_tol = kDefaultRegTol) {
  (void)reg_tol;
  return {compose(t2.phi, t1.phi, tol), compose(t2.psi, t1.phi, tol) * t1.psi,
          compose(t2.rho, t1.phi, tol) * t1.rho};
}

}  // namespace lfode
