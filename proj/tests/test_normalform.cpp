#include "lfode/normalform.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "lfode/mobius.hpp"

using namespace lfode;

namespace {

constexpr int K = 12;

Jet<double> pad(std::vector<double> c, int order = K, double base = 0.0) {
  c.resize(static_cast<size_t>(order) + 1, 0.0);
  return Jet<double>(base, std::move(c));
}

Jet<double> exp_jet(int order = K) { return exp(Jet<double>::variable(0.0, order)); }

Jet<double> random_jet(std::mt19937_64& rng, int order = K, double base = 0.0) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> c(static_cast<size_t>(order) + 1);
  for (double& x : c) x = dist(rng);
  return Jet<double>(base, std::move(c));
}

LinearOperator<double> random_operator(std::mt19937_64& rng, int n, int order = K) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Jet<double>> coeffs;
  for (int k = 0; k < n; ++k) coeffs.push_back(random_jet(rng, order));
  auto lead = random_jet(rng, order).coeffs();
  lead[0] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
  coeffs.emplace_back(0.0, std::move(lead));
  return LinearOperator<double>(std::move(coeffs));
}

double op_deviation(const LinearOperator<double>& A, const LinearOperator<double>& B,
                    int upto = -1) {
  double dev = 0.0;
  for (int k = 0; k <= A.order(); ++k)
    dev = std::max(dev, max_deviation(A.coeffs[k], B.coeffs[k], upto));
  return dev;
}

}  // namespace

TEST_CASE("gauge normalization") {
  SECTION("D^n is already normalized, transform is the identity") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({0}), pad({1})});
    const auto [out, tr] = gauge_normalize(D);
    CHECK(op_deviation(out, D, K - 5) < 1e-12);
    CHECK(max_deviation(tr.phi, Jet<double>::variable(0.0, K)) < 1e-12);
    CHECK(max_deviation(tr.psi, pad({1})) < 1e-12);
  }

  SECTION("constant leading coefficient 8 rescales to x/2") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({0}), pad({8})});
    const auto [out, tr] = gauge_normalize(D);
    CHECK(max_deviation(tr.phi, pad({0, 0.5})) < 1e-13);
    CHECK(max_deviation(tr.psi, pad({0.5})) < 1e-13);
    const LinearOperator<double> expected({pad({0}), pad({0}), pad({0}), pad({1})});
    CHECK(op_deviation(out, expected, K - 5) < 1e-12);
  }

  SECTION("the worked shift example: D^3 + 3D^2") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({3}), pad({1})});
    const auto [out, tr] = gauge_normalize(D);
    CHECK(max_deviation(tr.psi, exp_jet()) < 1e-12);
    const LinearOperator<double> expected({pad({2}), pad({-3}), pad({0}), pad({1})});
    CHECK(op_deviation(out, expected, K - 5) < 1e-10);
  }

  SECTION("negative leading coefficient keeps its sign") {
    const LinearOperator<double> D({pad({0}), pad({1}), pad({0}), pad({-1})});
    const auto [out, tr] = gauge_normalize(D);
    CHECK(out.coeffs[3][0] == Catch::Approx(-1.0));
    CHECK(approx_zero(out.coeffs[2], 1e-9));
  }

  SECTION("random operators normalize to +-1 and a vanishing subleading term") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 3 + trial % 4;
      const auto D = random_operator(rng, n);
      const auto [out, tr] = gauge_normalize(D);
      const double sign = D.leading().value() < 0 ? -1.0 : 1.0;
      const auto target = Jet<double>::constant(sign, out.base(), K);
      CHECK(max_deviation(out.coeffs[n], target) < 1e-9);
      CHECK(approx_zero(out.coeffs[n - 1], 1e-7));
    }
  }

  SECTION("normalizing twice gives the identity transform") {
    std::mt19937_64 rng(37);
    const auto D = random_operator(rng, 3);
    const auto first = gauge_normalize(D);
    const auto second = gauge_normalize(first.op);
    CHECK(max_deviation(second.transform.phi, Jet<double>::variable(0.0, K), K - 5) < 1e-10);
    CHECK(max_deviation(second.transform.psi, pad({1}), K - 5) < 1e-10);
  }

  SECTION("singular leading coefficient is rejected") {
    CHECK_THROWS_AS(
        gauge_normalize(LinearOperator<double>({pad({1}), pad({1}), pad({1e-9, 1})}, 1e-12)),
        SingularLeadingCoefficient);
  }
}

TEST_CASE("schwarzian derivative") {
  SECTION("vanishes on the identity") {
    CHECK(approx_zero(schwarzian(Jet<double>::variable(0.0, K)), 1e-15));
  }

  SECTION("exp has constant schwarzian -1/2") {
    const auto s = schwarzian(exp_jet());
    CHECK(max_deviation(s, pad({-0.5}), K - 3) < 1e-10);
  }

  SECTION("vanishes on a Moebius jet") {
    const auto f = make_map(2.0, 1.0, 1.0, 1.0);
    const auto s = schwarzian(as_jet(f, 0.0, K));
    CHECK(approx_zero(s, 1e-9));
  }

  SECTION("vanishes on random Moebius jets") {
    // the pole of the map stays at distance >= 0.8 from the expansion point
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    int done = 0;
    while (done < 20) {
      const double a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
      if (std::abs(a * d - b * c) < 0.3 || std::abs(d) < 0.3) continue;
      if (std::abs(c) > 1e-12 && std::abs(d / c) < 0.8) continue;
      const auto s = schwarzian(as_jet(make_map(a, b, c, d), 0.0, K));
      CHECK(approx_zero(s, 1e-9));
      ++done;
    }
  }
}

TEST_CASE("schwarzian equation solver") {
  SECTION("zero target gives the identity") {
    const auto phi = solve_schwarzian(Jet<double>(0.0, K), 3);
    CHECK(max_deviation(phi, Jet<double>::variable(0.0, K)) < 1e-15);
  }

  SECTION("constant target, one recursion step by hand") {
    // n = 3: phi''' = target/2 at the base point, so the cubic coefficient
    // is target/12
    const double c = 0.8;
    const auto phi = solve_schwarzian(pad({c}), 3);
    CHECK(phi[0] == 0.0);
    CHECK(phi[1] == 1.0);
    CHECK(phi[2] == 0.0);
    CHECK(phi[3] == Catch::Approx(c / 12.0));
  }

  SECTION("round trip against the schwarzian") {
    std::mt19937_64 rng(43);
    for (int n = 3; n <= 6; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto target = random_jet(rng);
        const auto phi = solve_schwarzian(target, n);
        const double factor = double(n) * (double(n) * n - 1.0) / 12.0;
        const auto back = schwarzian(phi) * factor;
        CHECK(max_deviation(back, target, K - 3) < 1e-8);
      }
    }
  }
}

TEST_CASE("Laguerre-Forsyth reduction") {
  SECTION("already in LF form: nothing to do") {
    const LinearOperator<double> D({pad({0, 1}), pad({2}), pad({0}), pad({0}), pad({1})});
    const auto [out, tr] = lf_reduce(D);
    CHECK(max_deviation(tr.phi, Jet<double>::variable(0.0, K)) < 1e-13);
    CHECK(op_deviation(out, D, K - 6) < 1e-12);
  }

  SECTION("n = 3: the D term is absorbed") {
    std::mt19937_64 rng(47);
    const auto a1 = random_jet(rng);
    const LinearOperator<double> D({random_jet(rng), a1, pad({0}), pad({1})});
    const auto [out, tr] = lf_reduce(D);
    CHECK(is_lf_form(out, 1e-8));
  }

  SECTION("n = 4 with constant a2, checked against the conjugation contract") {
    const LinearOperator<double> D(
        {pad({0}), pad({0}), pad({0.6}), pad({0}), pad({1})});
    const auto [out, tr] = lf_reduce(D);
    CHECK(is_lf_form(out, 1e-8));
    const auto direct = conjugate(D, tr);
    CHECK(op_deviation(out, direct, K - 8) < 1e-12);
    // and the transform really is the prescribed lift of its phi
    const auto phip = derivative(tr.phi);
    CHECK(max_deviation(tr.psi, pow(phip, 1.5), K - 3) < 1e-12);
    CHECK(max_deviation(tr.rho, pow(phip, -4.0), K - 3) < 1e-12);
  }

  SECTION("operators not in reduced form are rejected") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({1}), pad({1})});
    CHECK_THROWS_AS(lf_reduce(D), NotInReducedForm);
    const LinearOperator<double> E({pad({0}), pad({0}), pad({0}), pad({2})});
    CHECK_THROWS_AS(lf_reduce(E), NotInReducedForm);
  }
}

TEST_CASE("full reduction pipeline") {
  SECTION("D^n is a fixed point") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({0}), pad({0}), pad({1})});
    const auto [out, tr] = reduce_full(D);
    CHECK(op_deviation(out, D, K - 7) < 1e-12);
    CHECK(max_deviation(tr.phi, Jet<double>::variable(0.0, K), K - 3) < 1e-12);
  }

  SECTION("random operators land in LF form") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 3 + trial % 4;
      const auto D = random_operator(rng, n);
      const auto [out, tr] = reduce_full(D);
      CHECK(out.coeffs[n].valid_order() >= K - n - 3);
      CHECK(max_deviation(out.coeffs[n], Jet<double>::constant(1.0, out.base(), K)) < 1e-9);
      CHECK(approx_zero(out.coeffs[n - 1], 1e-7, K - n - 3));
      CHECK(approx_zero(out.coeffs[n - 2], 1e-7, K - n - 3));
    }
  }

  SECTION("exponential leading coefficient with a kernel spot check") {
    const LinearOperator<double> D({pad({0}), pad({0}), pad({0}), exp_jet()});
    const auto [out, tr] = reduce_full(D);
    CHECK(is_lf_form(out, 1e-8));
    // y = x^2 is in the kernel of e^x D^3; its image must be in the kernel
    // of the reduced operator
    const auto y = pad({0, 0, 1});
    const auto ybar = compose(tr.psi * y, reverse(tr.phi));
    CHECK(approx_zero(apply(out, ybar), 1e-6));
  }

  SECTION("negative leading coefficient still ends monic with +1") {
    std::mt19937_64 rng(59);
    auto lead = (random_jet(rng) * 0.3).coeffs();
    lead[0] = -1.2;
    const LinearOperator<double> D(
        {random_jet(rng), random_jet(rng), random_jet(rng), Jet<double>(0.0, lead)});
    const auto [out, tr] = reduce_full(D);
    CHECK(out.coeffs[3][0] == Catch::Approx(1.0).margin(1e-10));
    CHECK(is_lf_form(out, 1e-7));
  }
}
