#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "lfode/projaction.hpp"

namespace lfode {

/// A Laguerre-Forsyth form viewed as a section of the coefficient bundle:
/// the tuple (a_{n-3}, ..., a_0) of jets at the germ point 0, stored here by
/// coefficient degree (coeffs[k] = a_k). Bijective with the monic LF
/// operator D^n + a_{n-3} D^{n-3} + ... + a_0.
struct LFSection {
  int n = 0;
  std::vector<Jet<double>> coeffs;  // a_0 .. a_{n-3}

  int jet_order() const { return coeffs.front().order(); }
};

inline LFSection make_section(int n, std::vector<Jet<double>> coeffs, double tol = kDefaultTol) {
  if (n < 3) throw OrderTooLow("a section needs n >= 3");
  if (static_cast<int>(coeffs.size()) != n - 2)
    throw OrderMismatch("a section of order n carries n-2 coefficients");
  for (const auto& a : coeffs) {
    detail::require_compatible(coeffs.front(), a);
    if (std::abs(a.base()) > tol) throw Error("sections are germs at 0");
  }
  return {n, std::move(coeffs)};
}

inline LFSection zero_section(int n, int order) {
  std::vector<Jet<double>> c(static_cast<size_t>(n) - 2, Jet<double>(0.0, order));
  return {n, std::move(c)};
}

inline LinearOperator<double> to_operator(const LFSection& S) {
  const int K = S.jet_order();
  std::vector<Jet<double>> c = S.coeffs;
  c.emplace_back(0.0, K);                              // a_{n-2}
  c.emplace_back(0.0, K);                              // a_{n-1}
  c.push_back(Jet<double>::constant(1.0, 0.0, K));     // a_n
  return LinearOperator<double>(std::move(c));
}

/// Section of an LF-form operator at the germ point 0; the monic and
/// vanishing coefficients are validated to tolerance, then made exact.
/// Residuals in the vanishing slots scale with the coefficient magnitudes,
/// so the tolerance here is relative to the largest stored coefficient.
inline LFSection section_of(const LinearOperator<double>& D, const Config& cfg = Config{}) {
  double scale = 1.0;
  for (const auto& a : D.coeffs)
    for (int j = 0; j <= a.valid_order(); ++j) scale = std::max(scale, std::abs(a[j]));
  if (!is_lf_form(D, cfg.tol * scale))
    throw NotInLFForm("section_of expects Laguerre-Forsyth form");
  if (std::abs(D.base()) > cfg.tol) throw Error("sections are germs at 0");
  std::vector<Jet<double>> c(D.coeffs.begin(), D.coeffs.begin() + (D.order() - 2));
  for (auto& a : c) a = Jet<double>(0.0, a.coeffs(), a.valid_order());
  return {D.order(), std::move(c)};
}

inline bool is_zero_section(const LFSection& S, double tol = kDefaultTol) {
  for (const auto& a : S.coeffs)
    if (!approx_zero(a, tol)) return false;
  return true;
}

inline LinearOperator<double> act_on_section_op(const ProjectiveMap<double>& f, const LFSection& S,
                                                const Config& cfg) {
  return act_on_lf(f, to_operator(S), cfg);
}

/// Action of an isotropy map (f(0) = 0) on a germ at 0. The result is in
/// Laguerre-Forsyth form by the closure theorem, so the section is read off
/// without a numerical re-validation; germs normalized by maps with a pole
/// close to 0 have coefficients spanning many orders of magnitude, and an
/// absolute residual test on them is meaningless.
inline LFSection act_on_section(const ProjectiveMap<double>& f, const LFSection& S,
                                const Config& cfg = Config{}) {
  if (std::abs(eval(f, 0.0, cfg.reg_tol)) > cfg.tol)
    throw Error("act_on_section: map must fix the germ point 0");
  const LinearOperator<double> moved = act_on_section_op(f, S, cfg);
  std::vector<Jet<double>> c(moved.coeffs.begin(), moved.coeffs.begin() + (moved.order() - 2));
  for (auto& a : c) a = Jet<double>(0.0, a.coeffs(), a.valid_order());
  return {moved.order(), std::move(c)};
}

/// Regular class of a germ: the largest i with a_{n-3}, ..., a_{i+1}
/// identically zero and a_i nonvanishing at 0. nullopt when the germ is not
/// regular (first surviving coefficient vanishes at 0, or zero section).
inline std::optional<int> germ_class(const LFSection& S, const Config& cfg = Config{}) {
  for (int k = S.n - 3; k >= 0; --k) {
    if (approx_zero(S.coeffs[k], cfg.tol)) continue;
    if (std::abs(S.coeffs[k].value()) > cfg.reg_tol) return k;
    return std::nullopt;  // leading surviving coefficient vanishes at 0
  }
  return std::nullopt;  // zero section, handled separately
}

/// The invariant pair (a_i(0), a_i'(0)) of a regular germ of class i.
inline std::pair<double, double> ell(const LFSection& S, int i, const Config& cfg = Config{}) {
  const auto cls = germ_class(S, cfg);
  if (!cls || *cls != i) throw ClassMismatch("ell: i is not the regular class of this germ");
  return {S.coeffs[i][0], S.coeffs[i][1]};
}

/// Result of normalizing a regular germ under the orientation-preserving
/// isotropy group: the representative with ell = (+-1, 0) and the isotropy
/// map f(x) = a x / (c x + 1), a > 0, that achieves it.
struct NormalizedGerm {
  LFSection section;
  ProjectiveMap<double> map;
};

/// Find the isotropy map sending ell to (sign(a_i(0)), 0) by a damped
/// two-parameter Newton iteration against the engine-evaluated action.
/// Seeded at a = |a_i(0)|^{1/(n-i)}, c = 0.
inline NormalizedGerm normalize_germ(const LFSection& S, const Config& cfg = Config{}) {
  const auto cls = germ_class(S, cfg);
  if (!cls) throw NotRegularGerm("normalize_germ needs a regular germ");
  const int i = *cls;
  const double a0 = S.coeffs[i][0];
  const double target = a0 < 0.0 ? -1.0 : 1.0;

  auto residual = [&](double u, double cpar) -> std::pair<double, double> {
    const auto f = make_map(std::exp(u), 0.0, cpar, 1.0, cfg.reg_tol);
    const LFSection moved = act_on_section(f, S, cfg);
    return {moved.coeffs[i][0] - target, moved.coeffs[i][1]};
  };

  double u = std::log(std::abs(a0)) / double(S.n - i);
  double c = 0.0;
  auto [r1, r2] = residual(u, c);
  double rnorm = std::max(std::abs(r1), std::abs(r2));
  const double h = 1e-6;
  // polish two decades past the acceptance threshold (or to the numeric
  // noise floor, whichever comes first)
  for (int iter = 0; iter < 100 && rnorm >= 0.01 * cfg.tol; ++iter) {
    const auto [p1, p2] = residual(u + h, c);
    const auto [q1, q2] = residual(u, c + h);
    const double j11 = (p1 - r1) / h, j12 = (q1 - r1) / h;
    const double j21 = (p2 - r2) / h, j22 = (q2 - r2) / h;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14) throw NormalizationDiverged("normalize_germ: singular Jacobian");
    double du = -(j22 * r1 - j12 * r2) / det;
    double dc = -(-j21 * r1 + j11 * r2) / det;
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 12 && !improved; ++halving) {
      const auto [t1, t2] = residual(u + step * du, c + step * dc);
      const double tnorm = std::max(std::abs(t1), std::abs(t2));
      if (tnorm < rnorm || tnorm < cfg.tol) {
        u += step * du;
        c += step * dc;
        r1 = t1;
        r2 = t2;
        rnorm = tnorm;
        improved = true;
      }
      step *= 0.5;
    }
    if (!improved) break;  // stuck at the numeric noise floor
  }
  if (rnorm >= cfg.tol) throw NormalizationDiverged("normalize_germ: residual did not converge");

  const auto f = make_map(std::exp(u), 0.0, c, 1.0, cfg.reg_tol);
  return {act_on_section(f, S, cfg), f};
}

/// The orientation-reversing mirror x -> -x.
inline ProjectiveMap<double> mu_map() { return {-1.0, 0.0, 0.0, 1.0}; }

enum class Parity { AllOddVanish, FirstOddPositive, NotApplicable };

/// Canonical classification label of a regular germ (plus the fully
/// symmetric zero-section report emitted by the pipeline): class, normalized
/// sign, odd-index parity data, projective symmetry dimension, and the
/// canonical representatives. `canonical` is normalized under the full
/// isotropy group G0; `canonical_oriented` under the orientation-preserving
/// part only (the pre-mirror data).
struct GermSignature {
  int n = 0;
  std::optional<int> class_index;  // nullopt: zero section
  int epsilon = 0;                 // sign under G0 (always +1 when n-i is odd)
  int eps_oriented = 0;            // sign under G0+, i.e. sign(a_i(0))
  Parity parity = Parity::NotApplicable;
  int first_odd = 0;  // r for Parity::FirstOddPositive
  int sym_dim = 0;
  bool mu_applied = false;
  LFSection canonical;
  LFSection canonical_oriented;
  ProjectiveMap<double> normalizer;  // G0+ isotropy map from normalize_germ
};

inline GermSignature signature(const LFSection& S, const Config& cfg = Config{}) {
  const auto cls = germ_class(S, cfg);
  if (!cls) throw NotRegularGerm("signature needs a regular germ");
  const int i = *cls;

  GermSignature sig;
  sig.n = S.n;
  sig.class_index = i;

  NormalizedGerm norm = normalize_germ(S, cfg);
  sig.canonical_oriented = norm.section;
  sig.normalizer = norm.map;
  sig.eps_oriented = norm.section.coeffs[i][0] < 0.0 ? -1 : +1;

  const bool odd_weight = ((S.n - i) % 2 != 0);
  LFSection canon = norm.section;
  if (odd_weight) {
    // the mirror flips the sign of a_i(0); Omega+ already classifies under G0
    if (sig.eps_oriented < 0) {
      canon = normalize_germ(act_on_section(mu_map(), canon, cfg), cfg).section;
      sig.mu_applied = true;
    }
    sig.epsilon = +1;
    sig.parity = Parity::NotApplicable;
  } else {
    sig.epsilon = sig.eps_oriented;
    int r = 0;
    for (int j = 1; j <= i; j += 2) {
      if (std::abs(canon.coeffs[i - j][0]) > cfg.reg_tol) {
        r = j;
        break;
      }
    }
    if (r == 0) {
      sig.parity = Parity::AllOddVanish;
    } else {
      sig.parity = Parity::FirstOddPositive;
      sig.first_odd = r;
      if (canon.coeffs[i - r][0] < 0.0) {
        canon = normalize_germ(act_on_section(mu_map(), canon, cfg), cfg).section;
        sig.mu_applied = true;
      }
    }
  }
  sig.canonical = std::move(canon);
  sig.sym_dim = symmetry_dimension(to_operator(sig.canonical), cfg).dim;
  return sig;
}

enum class Group { G0Plus, G0 };

namespace detail {

inline bool sections_agree(const LFSection& a, const LFSection& b, const Config& cfg) {
  const int upto = a.jet_order() - a.n - 4;
  for (int k = 0; k <= a.n - 3; ++k) {
    const auto& f = a.coeffs[k];
    const auto& g = b.coeffs[k];
    int hi = std::min({f.valid_order(), g.valid_order(), upto});
    for (int j = 0; j <= hi; ++j) {
      const double scale = std::max({1.0, std::abs(f[j]), std::abs(g[j])});
      if (std::abs(f[j] - g[j]) > 10.0 * cfg.tol * scale) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Equivalence of two regular germs under the chosen isotropy group,
/// decided by comparing canonical representatives to the tested jet order.
inline bool equivalent(const LFSection& S1, const LFSection& S2, Group group,
                       const Config& cfg = Config{}) {
  if (S1.n != S2.n || S1.jet_order() != S2.jet_order())
    throw OrderMismatch("equivalent: sections live on different bundles");
  const GermSignature g1 = signature(S1, cfg);
  const GermSignature g2 = signature(S2, cfg);
  if (g1.class_index != g2.class_index) return false;
  if (group == Group::G0Plus) {
    return g1.eps_oriented == g2.eps_oriented &&
           detail::sections_agree(g1.canonical_oriented, g2.canonical_oriented, cfg);
  }
  if (g1.epsilon != g2.epsilon || g1.parity != g2.parity || g1.first_odd != g2.first_odd)
    return false;
  return detail::sections_agree(g1.canonical, g2.canonical, cfg);
}

/// Full classification pipeline: gauge normalize, reduce to
/// Laguerre-Forsyth form, classify the germ of the resulting section. The
/// zero section reports the fully symmetric label instead of a regular
/// class.
inline GermSignature classify_pipeline(const LinearOperator<double>& D,
                                       const Config& cfg = Config{}) {
  const Reduction<double> red = reduce_full(D, cfg);
  const LFSection S = section_of(red.op, cfg);
  if (is_zero_section(S, cfg.tol)) {
    GermSignature sig;
    sig.n = S.n;
    sig.class_index = std::nullopt;
    sig.canonical = zero_section(S.n, S.jet_order());
    sig.canonical_oriented = sig.canonical;
    sig.sym_dim = symmetry_dimension(to_operator(sig.canonical), cfg).dim;
    return sig;
  }
  return signature(S, cfg);
}

}  // namespace lfode
