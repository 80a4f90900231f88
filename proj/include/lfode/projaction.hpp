#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "lfode/mobius.hpp"
#include "lfode/normalform.hpp"

namespace lfode {

/// Generators of the projective algebra sl(2): d/dx, x d/dx, x^2 d/dx.
enum class Generator { Translation, Scaling, Special };

inline constexpr std::array<Generator, 3> kGenerators{Generator::Translation, Generator::Scaling,
                                                      Generator::Special};

/// Point-transformation lift of a projective map to Laguerre-Forsyth forms:
/// xbar = f(x), ybar = |f'|^{(n-1)/2} y, with the projective factor
/// rho = f'^{-n} keeping the result monic.
template <class T>
GaugeTransform<T> lift(const ProjectiveMap<T>& f, int n, const std::type_identity_t<T>& x0,
                       int order, double reg_tol = kDefaultRegTol) {
  const Jet<T> phi = as_jet(f, x0, order, reg_tol);
  const Jet<T> phip = derivative(phi);
  const double sign = val_of(phip.value()) < 0.0 ? -1.0 : 1.0;
  const Jet<T> abs_phip = phip * T(sign);
  const Jet<T> psi = pow(abs_phip, (double(n) - 1.0) / 2.0, reg_tol);
  const double rho_sign = (n % 2 == 0) ? 1.0 : sign;
  const Jet<T> rho = pow(abs_phip, -double(n), reg_tol) * T(rho_sign);
  return {phi, psi, rho};
}

/// Lifted action of a projective map on a Laguerre-Forsyth operator; the
/// result is again in Laguerre-Forsyth form, based at f(x0).
template <class T>
LinearOperator<T> act_on_lf(const ProjectiveMap<T>& f, const LinearOperator<T>& S,
                            const Config& cfg = Config{}) {
  if (!is_lf_form(S, cfg.tol)) throw NotInLFForm("act_on_lf expects Laguerre-Forsyth form");
  const T den = f.c * S.base() + f.d;
  if (std::abs(val_of(den)) <= cfg.reg_tol)
    throw PoleAtBasePoint("act_on_lf: map has a pole at the base point");
  return conjugate(S, lift(f, S.order(), S.base(), S.jet_order(), cfg.reg_tol), cfg.tol,
                   cfg.reg_tol);
}

namespace detail {

inline Jet<Dual> widen(const Jet<double>& f) {
  std::vector<Dual> c(f.coeffs().begin(), f.coeffs().end());
  return Jet<Dual>(Dual(f.base()), std::move(c), f.valid_order());
}

inline LinearOperator<Dual> widen(const LinearOperator<double>& D) {
  std::vector<Jet<Dual>> c;
  c.reserve(D.coeffs.size());
  for (const auto& a : D.coeffs) c.push_back(widen(a));
  return LinearOperator<Dual>(std::move(c));
}

inline Jet<double> tangent_part(const Jet<Dual>& f) {
  std::vector<double> c;
  c.reserve(f.coeffs().size());
  for (const Dual& x : f.coeffs()) c.push_back(x.dot);
  return Jet<double>(f.base().val, std::move(c), f.valid_order());
}

/// Flow of a generator at nilpotent time eps (eps^2 = 0).
inline ProjectiveMap<Dual> nilpotent_flow(Generator g) {
  const Dual eps{0.0, 1.0};
  switch (g) {
    case Generator::Translation: return {Dual(1.0), eps, Dual(0.0), Dual(1.0)};
    case Generator::Scaling: return {Dual(1.0) + eps, Dual(0.0), Dual(0.0), Dual(1.0)};
    case Generator::Special: return {Dual(1.0), Dual(0.0), -eps, Dual(1.0)};
  }
  throw Error("unknown generator");
}

/// Flow of a generator at finite time t (used by tests as the independent
/// finite-difference route).
inline ProjectiveMap<double> finite_flow(Generator g, double t) {
  switch (g) {
    case Generator::Translation: return {1.0, t, 0.0, 1.0};
    case Generator::Scaling: return {std::exp(t), 0.0, 0.0, 1.0};
    case Generator::Special: return {1.0, 0.0, -t, 1.0};
  }
  throw Error("unknown generator");
}

}  // namespace detail

/// Derivative at t = 0 of the section coefficients of act_on_lf(flow_t, S),
/// computed exactly to first order by carrying a nilpotent parameter through
/// the jet arithmetic. Returns one jet per section coefficient, indexed by
/// the coefficient degree k = 0 .. n-3. Requires the germ convention
/// base point 0.
inline std::vector<Jet<double>> infinitesimal_action(Generator g, const LinearOperator<double>& S,
                                                     const Config& cfg = Config{}) {
  if (!is_lf_form(S, cfg.tol)) throw NotInLFForm("infinitesimal_action expects LF form");
  if (std::abs(S.base()) > cfg.tol)
    throw Error("infinitesimal_action: germ convention requires base point 0");
  const LinearOperator<Dual> moved = act_on_lf(detail::nilpotent_flow(g), detail::widen(S), cfg);
  std::vector<Jet<double>> out;
  out.reserve(static_cast<size_t>(S.order()) - 2);
  for (int k = 0; k <= S.order() - 3; ++k)
    out.push_back(detail::tangent_part(shift_base(moved.coeffs[k], Dual(0.0))));
  return out;
}

/// Dimension and basis of the algebra of projective symmetries of a section,
/// from the numerical rank of the determining-equation matrix (one row per
/// coefficient/jet-order pair, one column per generator).
struct SymmetryResult {
  int dim = 0;
  std::vector<std::array<double, 3>> basis;  // unit triples in the (v1,v2,v3) basis
  double residual = 0.0;
  bool anomaly = false;  // set when dim = 2, which regular germs never attain
};

namespace detail {

inline int rank_and_nullspace(std::vector<std::array<double, 3>> rows, double rank_tol,
                              std::vector<std::array<double, 3>>& null_basis) {
  // cap large rows at unit max-entry; tiny rows stay small so measurement
  // noise cannot be promoted to a pivot
  for (auto& r : rows) {
    double m = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    if (m > 1.0)
      for (double& x : r) x /= m;
  }
  const size_t R = rows.size();
  std::array<std::vector<double>, 3> col;
  for (int j = 0; j < 3; ++j) {
    col[j].resize(R);
    for (size_t i = 0; i < R; ++i) col[j][i] = rows[i][j];
  }
  auto norm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  double scale0 = 1.0;
  for (int j = 0; j < 3; ++j) scale0 = std::max(scale0, norm(col[j]));
  const double threshold = rank_tol * scale0;

  // modified Gram-Schmidt with column pivoting; track each column as a
  // combination of the original columns so null vectors fall out
  std::array<bool, 3> used{false, false, false};
  std::array<std::array<double, 3>, 3> comb{};  // col_j as combination of originals
  for (int j = 0; j < 3; ++j) comb[j][j] = 1.0;

  int rank = 0;
  for (int step = 0; step < 3; ++step) {
    int pick = -1;
    double best = threshold;
    for (int j = 0; j < 3; ++j)
      if (!used[j] && norm(col[j]) > best) {
        best = norm(col[j]);
        pick = j;
      }
    if (pick < 0) break;
    used[pick] = true;
    const double nj = norm(col[pick]);
    std::vector<double> qv(R);
    std::array<double, 3> qc{};
    for (size_t i = 0; i < R; ++i) qv[i] = col[pick][i] / nj;
    for (int t = 0; t < 3; ++t) qc[t] = comb[pick][t] / nj;
    for (int j = 0; j < 3; ++j) {
      if (used[j]) continue;
      double dot = 0.0;
      for (size_t i = 0; i < R; ++i) dot += qv[i] * col[j][i];
      for (size_t i = 0; i < R; ++i) col[j][i] -= dot * qv[i];
      for (int t = 0; t < 3; ++t) comb[j][t] -= dot * qc[t];
    }
    ++rank;
  }

  null_basis.clear();
  for (int j = 0; j < 3; ++j) {
    if (used[j]) continue;
    // residual col_j is below threshold: comb[j] is a null direction
    null_basis.push_back(comb[j]);
  }
  // orthonormalize the null directions
  for (size_t s = 0; s < null_basis.size(); ++s) {
    auto& v = null_basis[s];
    for (size_t t = 0; t < s; ++t) {
      const auto& w = null_basis[t];
      const double dot = v[0] * w[0] + v[1] * w[1] + v[2] * w[2];
      for (int i = 0; i < 3; ++i) v[i] -= dot * w[i];
    }
    const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (int i = 0; i < 3; ++i) v[i] /= nv;
  }
  return rank;
}

}  // namespace detail

inline SymmetryResult symmetry_dimension(const LinearOperator<double>& S,
                                         const Config& cfg = Config{}) {
  if (!is_lf_form(S, cfg.tol)) throw NotInLFForm("symmetry_dimension expects LF form");
  const int n = S.order();
  const int max_order = S.jet_order() - n - 4;
  if (max_order < 0) throw Error("symmetry_dimension: jet order too small for this n");

  std::array<std::vector<Jet<double>>, 3> action;
  for (int g = 0; g < 3; ++g) action[g] = infinitesimal_action(kGenerators[g], S, cfg);

  std::vector<std::array<double, 3>> rows;
  for (int k = 0; k <= n - 3; ++k) {
    int hi = max_order;
    for (int g = 0; g < 3; ++g) hi = std::min(hi, action[g][k].valid_order());
    for (int j = 0; j <= hi; ++j)
      rows.push_back({action[0][k][j], action[1][k][j], action[2][k][j]});
  }

  SymmetryResult res;
  std::vector<std::array<double, 3>> null_basis;
  const int rank = detail::rank_and_nullspace(rows, cfg.rank_tol, null_basis);
  res.dim = 3 - rank;
  res.basis = std::move(null_basis);
  res.anomaly = (res.dim == 2);
  res.residual = 0.0;
  for (const auto& v : res.basis)
    for (const auto& r : rows)
      res.residual = std::max(res.residual, std::abs(r[0] * v[0] + r[1] * v[1] + r[2] * v[2]));
  return res;
}

}  // namespace lfode
