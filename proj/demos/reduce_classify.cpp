// Walkthrough: build y''' + 3 y'' = 0 as an operator, reduce it to
// Laguerre-Forsyth form, and classify the germ of the resulting section.

#include <iostream>

#include "lfode/lfode.hpp"

int main() {
  using namespace lfode;
  const Config cfg;
  const int K = cfg.order;

  std::vector<Jet<double>> coeffs{
      Jet<double>(0.0, K),                    // a0
      Jet<double>(0.0, K),                    // a1
      Jet<double>::constant(3.0, 0.0, K),     // a2
      Jet<double>::constant(1.0, 0.0, K),     // a3
  };
  const LinearOperator<double> D(std::move(coeffs));

  const auto red = reduce_full(D, cfg);
  std::cout << "Laguerre-Forsyth form:\n" << emit_lode(document_from_operator(red.op));

  const auto sig = classify_pipeline(D, cfg);
  std::cout << "\nsignature:\n" << emit_signature(sig);

  const auto sym = symmetry_dimension(red.op, cfg);
  std::cout << "\nprojective symmetries: dim " << sym.dim << "\n";
  return 0;
}
