#pragma once

#include <cmath>

#include "lfode/jet.hpp"

namespace lfode {

/// Projective transformation f(x) = (a x + b)/(c x + d) of the real line,
/// kept determinant-normalized to |ad - bc| = 1. The sign of ad - bc is the
/// orientation: +1 on the f' > 0 component of the group, -1 on f' < 0.
template <class T = double>
struct ProjectiveMap {
  T a{1.0}, b{}, c{}, d{1.0};

  static ProjectiveMap identity() { return {}; }

  T det() const { return a * d - b * c; }
  int orientation() const { return val_of(det()) < 0.0 ? -1 : +1; }
};

template <class T>
ProjectiveMap<T> normalized(ProjectiveMap<T> f, double reg_tol = kDefaultRegTol) {
  using std::abs;
  using std::sqrt;
  const T det = f.det();
  if (std::abs(val_of(det)) <= reg_tol) throw DegenerateMap("projective map has ad - bc ~ 0");
  const T s = sqrt(abs(det));
  return {f.a / s, f.b / s, f.c / s, f.d / s};
}

template <class T>
ProjectiveMap<T> make_map(const T& a, const T& b, const T& c, const T& d,
                          double reg_tol = kDefaultRegTol) {
  return normalized(ProjectiveMap<T>{a, b, c, d}, reg_tol);
}

template <class T>
ProjectiveMap<T> compose(const ProjectiveMap<T>& f, const ProjectiveMap<T>& g,
                         double reg_tol = kDefaultRegTol) {
  // matrix product: (f o g)(x) = f(g(x))
  return normalized(ProjectiveMap<T>{f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                                     f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d},
                    reg_tol);
}

template <class T>
ProjectiveMap<T> inverse(const ProjectiveMap<T>& f, double reg_tol = kDefaultRegTol) {
  return normalized(ProjectiveMap<T>{f.d, -f.b, -f.c, f.a}, reg_tol);
}

template <class T>
T eval(const ProjectiveMap<T>& f, const std::type_identity_t<T>& x,
       double reg_tol = kDefaultRegTol) {
  const T den = f.c * x + f.d;
  if (std::abs(val_of(den)) <= reg_tol) throw PoleAtBasePoint("projective map has a pole here");
  return (f.a * x + f.b) / den;
}

/// Taylor jet of f at x0.
template <class T>
Jet<T> as_jet(const ProjectiveMap<T>& f, const std::type_identity_t<T>& x0, int order,
              double reg_tol = kDefaultRegTol) {
  const Jet<T> x = Jet<T>::variable(x0, order);
  const Jet<T> den = x * f.c + f.d;
  if (std::abs(val_of(den.value())) <= reg_tol)
    throw PoleAtBasePoint("projective map has a pole at the expansion point");
  const Jet<T> num = x * f.a + f.b;
  return div(num, den, reg_tol);
}

}  // namespace lfode
