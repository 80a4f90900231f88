#pragma once

#include <cmath>
#include <utility>

#include "lfode/operator.hpp"

namespace lfode {

template <class T>
struct Reduction {
  LinearOperator<T> op;
  GaugeTransform<T> transform;
};

/// Gauge normalization: make the leading coefficient +-1 and kill the
/// D^{n-1} term, via
///   phi(x)  = integral dx / |a_n|^{1/n},
///   psi(x)  = |a_n|^{(1-n)/(2n)} exp{ integral a_{n-1} / (n a_n) },
/// both integrals vanishing at the base point. The sign of the reduced
/// leading coefficient is the sign of a_n at the base point.
template <class T>
Reduction<T> gauge_normalize(const LinearOperator<T>& D, const Config& cfg = Config{}) {
  const int n = D.order();
  if (n < 2) throw OrderTooLow("gauge normalization needs order >= 2");
  const Jet<T>& an = D.leading();
  if (std::abs(val_of(an.value())) <= cfg.reg_tol)
    throw SingularLeadingCoefficient("gauge normalization: a_n vanishes at the base point");

  const double sign = val_of(an.value()) < 0.0 ? -1.0 : 1.0;
  const Jet<T> abs_an = an * T(sign);
  const Jet<T> phi = antiderivative(pow(abs_an, -1.0 / n, cfg.reg_tol));
  const Jet<T> psi = pow(abs_an, (1.0 - n) / (2.0 * n), cfg.reg_tol) *
                     exp(antiderivative(div(D.coeffs[n - 1], an * T(double(n)), cfg.reg_tol)));
  const GaugeTransform<T> tr{phi, psi, Jet<T>::constant(T(1.0), D.base(), D.jet_order())};
  return {conjugate(D, tr, cfg.tol, cfg.reg_tol), tr};
}

/// Schwarzian derivative (phi' phi''' - (3/2) phi''^2) / phi'^2, valid to
/// order K - 3.
template <class T>
Jet<T> schwarzian(const Jet<T>& phi, double reg_tol = kDefaultRegTol) {
  const Jet<T> p1 = derivative(phi);
  if (std::abs(val_of(p1.value())) <= reg_tol)
    throw NonInvertibleJet("schwarzian: phi'(x0) ~ 0");
  const Jet<T> p2 = derivative(p1);
  const Jet<T> p3 = derivative(p2);
  return div(p1 * p3 - T(1.5) * (p2 * p2), p1 * p1, reg_tol);
}

/// Solve (n(n^2-1)/12) S(phi) = target for phi with phi(x0) = x0,
/// phi'(x0) = 1, phi''(x0) = 0, degree by degree via
///   phi''' = [ (12/(n(n^2-1))) target phi'^2 + (3/2) phi''^2 ] / phi'.
/// The recursion is triangular and the pivot phi'(x0) = 1 never degenerates.
template <class T>
Jet<T> solve_schwarzian(const Jet<T>& target, int n) {
  if (n < 3) throw OrderTooLow("solve_schwarzian needs order >= 3");
  const int K = target.order();
  const T base = target.base();
  const double c = 12.0 / (double(n) * (double(n) * double(n) - 1.0));

  std::vector<T> p(static_cast<size_t>(K) + 1, T{});
  p[0] = base;
  if (K >= 1) p[1] = T(1.0);
  for (int m = 3; m <= K; ++m) {
    const Jet<T> phi(base, p);  // coefficients below m are final, rest zero
    const Jet<T> p1 = derivative(phi);
    const Jet<T> p2 = derivative(p1);
    const Jet<T> rhs = div(T(c) * (target * (p1 * p1)) + T(1.5) * (p2 * p2), p1);
    p[m] = rhs[m - 3] / T(double(m) * double(m - 1) * double(m - 2));
  }
  Jet<T> phi(base, std::move(p));
  phi.override_valid(std::min(K, target.valid_order() + 3));
  return phi;
}

/// Projective reduction of an operator already in gauge-normalized form
/// (+-D^n + a_{n-2} D^{n-2} + ...) to Laguerre-Forsyth form, with
/// psi = phi'^{(n-1)/2} and rho = +-phi'^{-n}, the sign fixed so the result
/// is monic with +1.
template <class T>
Reduction<T> lf_reduce(const LinearOperator<T>& D, const Config& cfg = Config{}) {
  const int n = D.order();
  if (n < 3) throw OrderTooLow("Laguerre-Forsyth reduction needs order >= 3");
  const Jet<T> one = Jet<T>::constant(T(1.0), D.base(), D.jet_order());
  const double lead = val_of(D.leading().value());
  const double sign = lead < 0.0 ? -1.0 : 1.0;
  // the zero test is relative to the operator's coefficient magnitudes:
  // roundoff in the vanishing slots scales with the other coefficients
  double scale = 1.0;
  for (const auto& a : D.coeffs)
    for (int j = 0; j <= a.valid_order(); ++j) scale = std::max(scale, std::abs(val_of(a[j])));
  if (!approx_zero(D.leading() - one * T(sign), cfg.tol * scale) ||
      !approx_zero(D.coeffs[n - 1], cfg.tol * scale))
    throw NotInReducedForm("lf_reduce expects a_n = +-1 and a_{n-1} = 0");

  const Jet<T> phi = solve_schwarzian(D.coeffs[n - 2] * T(sign), n);
  const Jet<T> phip = derivative(phi);
  const Jet<T> psi = pow(phip, (double(n) - 1.0) / 2.0, cfg.reg_tol);
  const Jet<T> rho = pow(phip, -double(n), cfg.reg_tol) * T(sign);
  const GaugeTransform<T> tr{phi, psi, rho};
  return {conjugate(D, tr, cfg.tol, cfg.reg_tol), tr};
}

/// Full pipeline: gauge normalization followed by Laguerre-Forsyth
/// reduction, with the two transforms composed.
template <class T>
Reduction<T> reduce_full(const LinearOperator<T>& D, const Config& cfg = Config{}) {
  if (D.order() < 3) throw OrderTooLow("reduce_full needs order >= 3");
  Reduction<T> g = gauge_normalize(D, cfg);
  Reduction<T> l = lf_reduce(g.op, cfg);
  return {std::move(l.op), compose_transforms(l.transform, g.transform, cfg.tol, cfg.reg_tol)};
}

}  // namespace lfode
