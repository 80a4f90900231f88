#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lfode/germ.hpp"

namespace lfode {

/// In-memory form of a .lode document: one linear ODE given by its order,
/// expansion point, truncation order and coefficient series. Missing
/// coefficients are zero; short series are zero-padded to K+1 entries.
struct LodeDocument {
  int n = 0;
  double x0 = 0.0;
  int order = kDefaultOrder;  // K
  std::map<int, std::vector<double>> series;

  bool operator==(const LodeDocument&) const = default;
};

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token, int line) {
  const std::string t(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || t.empty())
    throw ParseError(line, "expected a real number, got '" + t + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + t + "'");
  return v;
}

inline long parse_integer(std::string_view token, int line) {
  const std::string t(token);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || t.empty())
    throw ParseError(line, "expected an integer, got '" + t + "'");
  return v;
}

inline std::vector<double> parse_real_list(std::string_view text, int line) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos > start) out.push_back(parse_real(text.substr(start, pos - start), line));
  }
  if (out.empty()) throw ParseError(line, "empty value");
  return out;
}

}  // namespace detail

/// Parse the line-oriented `key = value` format. `#` starts a comment, keys
/// are `n`, `x0`, `K` and `a<k>`; duplicate and unknown keys are errors.
inline LodeDocument parse_lode(std::string_view text, const Config& cfg = Config{}) {
  LodeDocument doc;
  bool have_n = false, have_x0 = false, have_k = false;
  int line_no = 0;

  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));

    if (key == "n") {
      if (have_n) throw DuplicateKey(line_no, "duplicate key 'n'");
      have_n = true;
      doc.n = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "x0") {
      if (have_x0) throw DuplicateKey(line_no, "duplicate key 'x0'");
      have_x0 = true;
      doc.x0 = detail::parse_real(value, line_no);
    } else if (key == "K") {
      if (have_k) throw DuplicateKey(line_no, "duplicate key 'K'");
      have_k = true;
      doc.order = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key.size() >= 2 && key[0] == 'a' &&
               key.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int k = static_cast<int>(detail::parse_integer(key.substr(1), line_no));
      if (doc.series.count(k)) throw DuplicateKey(line_no, "duplicate key '" + key + "'");
      doc.series[k] = detail::parse_real_list(value, line_no);
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }

  if (!have_n) throw ParseError("missing key 'n'");
  if (doc.n < 2) throw ParseError("n must be >= 2");
  if (!have_k) doc.order = cfg.order;
  if (doc.order < 4) throw ParseError("K must be >= 4");
  for (const auto& [k, entries] : doc.series) {
    if (k < 0 || k > doc.n)
      throw ParseError("coefficient index a" + std::to_string(k) + " outside 0..n");
    if (static_cast<int>(entries.size()) > doc.order + 1)
      throw ParseError("a" + std::to_string(k) + " has more than K+1 entries");
  }
  const auto lead = doc.series.find(doc.n);
  if (lead == doc.series.end() || std::abs(lead->second.front()) <= cfg.reg_tol)
    throw MissingLeadingCoefficient("a" + std::to_string(doc.n) +
                                    " must be present and nonvanishing at x0");
  return doc;
}

inline LinearOperator<double> to_operator(const LodeDocument& doc, const Config& cfg = Config{}) {
  std::vector<Jet<double>> coeffs;
  coeffs.reserve(static_cast<size_t>(doc.n) + 1);
  for (int k = 0; k <= doc.n; ++k) {
    std::vector<double> c(static_cast<size_t>(doc.order) + 1, 0.0);
    if (const auto it = doc.series.find(k); it != doc.series.end())
      std::copy(it->second.begin(), it->second.end(), c.begin());
    coeffs.emplace_back(doc.x0, std::move(c));
  }
  return LinearOperator<double>(std::move(coeffs), cfg.reg_tol);
}

namespace detail {

/// Coefficients up to the validity watermark, with trailing zeros dropped.
inline std::vector<double> trimmed_coeffs(const Jet<double>& f) {
  const int hi = std::max(f.valid_order(), 0);
  std::vector<double> out(f.coeffs().begin(), f.coeffs().begin() + hi + 1);
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

inline std::string format_series(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_real(v[i]);
  }
  return out;
}

inline bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace detail

inline LodeDocument document_from_operator(const LinearOperator<double>& D) {
  LodeDocument doc;
  doc.n = D.order();
  doc.x0 = D.base();
  doc.order = D.jet_order();
  for (int k = 0; k <= D.order(); ++k) {
    auto c = detail::trimmed_coeffs(D.coeffs[k]);
    if (!detail::all_zero(c)) doc.series[k] = std::move(c);
  }
  return doc;
}

inline LodeDocument document_from_section(const LFSection& S) {
  return document_from_operator(to_operator(S));
}

/// Canonical text rendering: fixed key order, 17 significant digits,
/// zero series omitted. Round-trips through parse_lode bit-identically.
inline std::string emit_lode(const LodeDocument& doc) {
  std::string out;
  out += "n = " + std::to_string(doc.n) + "\n";
  out += "x0 = " + detail::format_real(doc.x0) + "\n";
  out += "K = " + std::to_string(doc.order) + "\n";
  for (int k = doc.n; k >= 0; --k) {
    const auto it = doc.series.find(k);
    if (it == doc.series.end() || detail::all_zero(it->second)) continue;
    out += "a" + std::to_string(k) + " = " + detail::format_series(it->second) + "\n";
  }
  return out;
}

inline std::string emit_reduction(const Reduction<double>& red) {
  std::string out = emit_lode(document_from_operator(red.op));
  out += "phi = " + detail::format_series(detail::trimmed_coeffs(red.transform.phi)) + "\n";
  out += "psi = " + detail::format_series(detail::trimmed_coeffs(red.transform.psi)) + "\n";
  out += "rho = " + detail::format_series(detail::trimmed_coeffs(red.transform.rho)) + "\n";
  return out;
}

inline std::string parity_label(const GermSignature& sig) {
  switch (sig.parity) {
    case Parity::AllOddVanish: return "all_odd_vanish";
    case Parity::FirstOddPositive: return "first_odd_positive " + std::to_string(sig.first_odd);
    case Parity::NotApplicable: return "n/a";
  }
  return "n/a";
}

inline std::string emit_signature(const GermSignature& sig) {
  std::string out;
  if (!sig.class_index) {
    out += "class = none\n";
    out += "sym_dim = " + std::to_string(sig.sym_dim) + "\n";
  } else {
    out += "class = " + std::to_string(*sig.class_index) + "\n";
    out += std::string("epsilon = ") + (sig.epsilon < 0 ? "-1" : "+1") + "\n";
    out += "parity = " + parity_label(sig) + "\n";
    out += "sym_dim = " + std::to_string(sig.sym_dim) + "\n";
  }
  out += emit_lode(document_from_section(sig.canonical));
  return out;
}

inline std::string emit_symmetries(const SymmetryResult& res) {
  std::string out = "dim = " + std::to_string(res.dim) + "\n";
  for (const auto& v : res.basis)
    out += "basis = " + detail::format_real(v[0]) + " " + detail::format_real(v[1]) + " " +
           detail::format_real(v[2]) + "\n";
  out += "residual = " + detail::format_real(res.residual) + "\n";
  if (res.anomaly) out += "anomaly = true\n";
  return out;
}

}  // namespace lfode
