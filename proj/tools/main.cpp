// lfode: reduce linear ODEs to Laguerre-Forsyth form, act with projective
// maps, and classify regular germs. Exit codes: 0 success (and "equivalent"
// for equiv), 1 inequivalent, 2 usage/parse error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfode/lfode.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lfode::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json coefficients_json(const lfode::LodeDocument& doc) {
  json coeffs = json::object();
  for (int k = doc.n; k >= 0; --k) {
    const auto it = doc.series.find(k);
    if (it == doc.series.end() || lfode::detail::all_zero(it->second)) continue;
    coeffs["a" + std::to_string(k)] = it->second;
  }
  return coeffs;
}

json document_json(const lfode::LodeDocument& doc) {
  json out = json::object();
  out["n"] = doc.n;
  out["x0"] = doc.x0;
  out["K"] = doc.order;
  out["coefficients"] = coefficients_json(doc);
  return out;
}

std::vector<double> jet_values(const lfode::Jet<double>& f) {
  return lfode::detail::trimmed_coeffs(f);
}

int run_reduce(const std::string& path, const lfode::Config& cfg, bool as_json) {
  const auto doc = lfode::parse_lode(read_file(path), cfg);
  const auto red = lfode::reduce_full(lfode::to_operator(doc, cfg), cfg);
  if (as_json) {
    json out = document_json(lfode::document_from_operator(red.op));
    out["phi"] = jet_values(red.transform.phi);
    out["psi"] = jet_values(red.transform.psi);
    out["rho"] = jet_values(red.transform.rho);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << lfode::emit_reduction(red);
  }
  return 0;
}

json signature_json(const lfode::GermSignature& sig) {
  json out = json::object();
  if (sig.class_index)
    out["class"] = *sig.class_index;
  else
    out["class"] = nullptr;
  if (sig.class_index) {
    out["epsilon"] = sig.epsilon;
    out["parity"] = lfode::parity_label(sig);
  }
  out["sym_dim"] = sig.sym_dim;
  out["canonical"] = document_json(lfode::document_from_section(sig.canonical));
  return out;
}

int run_classify(const std::string& path, const lfode::Config& cfg, bool as_json) {
  const auto doc = lfode::parse_lode(read_file(path), cfg);
  const auto sig = lfode::classify_pipeline(lfode::to_operator(doc, cfg), cfg);
  if (as_json)
    std::cout << signature_json(sig).dump(2) << "\n";
  else
    std::cout << lfode::emit_signature(sig);
  return 0;
}

int run_symmetries(const std::string& path, const lfode::Config& cfg, bool as_json) {
  const auto doc = lfode::parse_lode(read_file(path), cfg);
  const auto red = lfode::reduce_full(lfode::to_operator(doc, cfg), cfg);
  const auto res = lfode::symmetry_dimension(red.op, cfg);
  if (as_json) {
    json out = json::object();
    out["dim"] = res.dim;
    json basis = json::array();
    for (const auto& v : res.basis) basis.push_back({v[0], v[1], v[2]});
    out["basis"] = basis;
    out["residual"] = res.residual;
    out["anomaly"] = res.anomaly;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << lfode::emit_symmetries(res);
  }
  return 0;
}

int run_equiv(const std::string& path1, const std::string& path2, const std::string& group_name,
              const lfode::Config& cfg, bool as_json) {
  const auto group = group_name == "g0" ? lfode::Group::G0 : lfode::Group::G0Plus;
  const auto sig_of = [&](const std::string& p) {
    const auto doc = lfode::parse_lode(read_file(p), cfg);
    const auto red = lfode::reduce_full(lfode::to_operator(doc, cfg), cfg);
    return lfode::section_of(red.op, cfg);
  };
  const auto s1 = sig_of(path1);
  const auto s2 = sig_of(path2);
  if (s1.n != s2.n || s1.jet_order() != s2.jet_order())
    throw lfode::OrderMismatch("equiv: inputs have different n or K");

  bool equal = false;
  const bool z1 = lfode::is_zero_section(s1, cfg.tol);
  const bool z2 = lfode::is_zero_section(s2, cfg.tol);
  if (z1 || z2)
    equal = z1 && z2;  // the fully symmetric class
  else
    equal = lfode::equivalent(s1, s2, group, cfg);

  if (as_json) {
    json out = json::object();
    out["equivalent"] = equal;
    out["group"] = group_name;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (equal ? "equivalent" : "inequivalent") << "\n";
  }
  return equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laguerre-Forsyth reduction and projective classification of linear ODEs"};
  app.require_subcommand(1);

  lfode::Config cfg;
  bool as_json = false;
  app.add_option("--order", cfg.order, "jet truncation order K")->check(CLI::Range(4, 64));
  app.add_option("--tol", cfg.tol, "coefficient zero threshold");
  app.add_flag("--json", as_json, "emit a structured-object rendering");

  std::string file1, file2, group_name = "g0plus";

  auto* reduce = app.add_subcommand("reduce", "print the Laguerre-Forsyth form and transform");
  reduce->add_option("file", file1, "input .lode file")->required();

  auto* classify = app.add_subcommand("classify", "print the germ signature");
  classify->add_option("file", file1, "input .lode file")->required();

  auto* symmetries = app.add_subcommand("symmetries", "print the projective symmetry dimension");
  symmetries->add_option("file", file1, "input .lode file")->required();

  auto* equiv = app.add_subcommand("equiv", "decide equivalence of two inputs");
  equiv->add_option("file1", file1, "first .lode file")->required();
  equiv->add_option("file2", file2, "second .lode file")->required();
  equiv->add_option("--group", group_name, "isotropy group")
      ->check(CLI::IsMember({"g0plus", "g0"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    cfg.validate();
    if (reduce->parsed()) return run_reduce(file1, cfg, as_json);
    if (classify->parsed()) return run_classify(file1, cfg, as_json);
    if (symmetries->parsed()) return run_symmetries(file1, cfg, as_json);
    if (equiv->parsed()) return run_equiv(file1, file2, group_name, cfg, as_json);
    return 2;
  } catch (const lfode::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lfode::MissingLeadingCoefficient& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lfode::OrderTooLow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lfode::OrderMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lfode::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
