#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hsreg/diffpoly.hpp"
#include "hsreg/errors.hpp"
#include "oracles.hpp"

using namespace hsreg;
using namespace hsreg::diffpoly;

namespace {

DiffPoly u(int k = 0) { return DiffPoly::field(k); }
DiffPoly c(long p, long q = 1) { return DiffPoly::constant(Rational(p, q)); }

// (1/4 d^3 + u d + 1/2 u_x) applied to p
DiffPoly gd_operator(const DiffPoly& p) {
  const DiffPoly p1 = derive(p);
  const DiffPoly p3 = derive(derive(p1));
  return scale(p3, Rational(1, 4)) + u() * p1 + scale(u(1) * p, Rational(1, 2));
}

}  // namespace

TEST_CASE("ring operations") {
  CHECK(add(u(), -u()).is_zero());
  CHECK(mul(u(), u()) == DiffPoly::term(Monomial({0, 0}), Rational(1)));
  CHECK(scale(u(2), Rational(1, 8)).coefficient(Monomial({2})) == Rational(1, 8));
  CHECK(scale(u(), Rational(0)).is_zero());
  const DiffPoly a = u() + c(2), b = u(1) - u(2), d = c(3, 7) * u() * u(3);
  CHECK(mul(a, b + d) == mul(a, b) + mul(a, d));
  CHECK(mul(mul(a, b), d) == mul(a, mul(b, d)));
  CHECK(mul(a, b) == mul(b, a));
}

TEST_CASE("derive follows the Leibniz rule") {
  CHECK(derive(u() * u()) == scale(u() * u(1), Rational(2)));
  CHECK(derive(scale(u(), Rational(1, 2))) == scale(u(1), Rational(1, 2)));
  CHECK(derive(c(5)).is_zero());
  const DiffPoly p = u() * u(2) + c(3) * u(1), q = u(1) * u(1) * u(4);
  CHECK(derive(p * q) == derive(p) * q + p * derive(q));
}

TEST_CASE("integrate inverts derive on its image") {
  CHECK(integrate(scale(u() * u(1), Rational(2))) == u() * u());
  CHECK(integrate(scale(u(1), Rational(1, 2))) == scale(u(), Rational(1, 2)));
  CHECK_THROWS_AS(integrate(u() * u()), NotExactDerivative);
  CHECK_THROWS_AS(integrate(u()), NotExactDerivative);
  const DiffPoly samples[] = {u() * u() * u(3), u(1) * u(2) + u() * u(5), c(2, 3) * u(1) * u(1) * u(1)};
  for (const auto& p : samples) {
    const DiffPoly dp = derive(p);
    CHECK(derive(integrate(dp)) == dp);
  }
}

TEST_CASE("recursion reproduces the low-order polynomials") {
  const auto R = gelfand_dikii(3);
  CHECK(R[0] == c(1));
  CHECK(gd_next(c(1)) == scale(u(), Rational(1, 2)));
  CHECK(R[2] == scale(u(2) + c(3) * u() * u(), Rational(1, 8)));
  CHECK(R[2].to_string() == "3/8*u^2 + 1/8*u_xx");
  CHECK(R[3].dispersionless_part() == DiffPoly::term(Monomial({0, 0, 0}), Rational(5, 16)));
}

TEST_CASE("recursion invariants up to n = 6") {
  const auto R = gelfand_dikii(7);
  for (int n = 0; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(derive(R[n + 1]) == gd_operator(R[n]));
    if (n > 0) {
      REQUIRE(R[n].homogeneous_weight().has_value());
      CHECK(*R[n].homogeneous_weight() == 2 * n);
    }
    const Rational expected = binomial(2 * n, n) / pow(Rational(4), n);
    CHECK(R[n].dispersionless_part() == DiffPoly::term(Monomial(std::vector<int>(n, 0)), expected));
  }
}

TEST_CASE("quadratic identity holds through z^{-6} with three terms") {
  // (R R'' - R'^2/2) - 2(z^2 - u) R^2 + 2 z^2 with R = sum R_n z^{-2n}
  const auto R = gelfand_dikii(4);
  auto conv = [&](int k, auto f) {
    DiffPoly s;
    for (int i = 0; i <= k; ++i) s += f(R[i], R[k - i]);
    return s;
  };
  auto sq = [](const DiffPoly& a, const DiffPoly& b) { return a * b; };
  auto disp = [](const DiffPoly& a, const DiffPoly& b) {
    return a * derive(derive(b)) - scale(derive(a) * derive(b), Rational(1, 2));
  };
  // coefficient of z^2
  CHECK((c(2) - scale(R[0] * R[0], Rational(2))).is_zero());
  for (int k = 0; k <= 3; ++k) {
    CAPTURE(k);
    const DiffPoly coef = conv(k, disp) + scale(u() * conv(k, sq), Rational(2)) - scale(conv(k + 1, sq), Rational(2));
    CHECK(coef.is_zero());
  }
}

TEST_CASE("eval agrees with direct substitution") {
  CHECK(eval(scale(u(), Rational(1, 2)), std::vector<double>{3.0}) == doctest::Approx(1.5));
  const auto R = gelfand_dikii(5);
  CHECK(eval(R[2], std::vector<double>{1.0, 0.0, 2.0}) == doctest::Approx(0.625));
  CHECK_THROWS_AS(eval(R[3], std::vector<double>{1.0, 2.0}), JetTooShort);
  // jet of u(x) = sin(x) + x^2/3 at x = 0.7
  const double x = 0.7;
  std::vector<double> jet{std::sin(x) + x * x / 3, std::cos(x) + 2 * x / 3, -std::sin(x) + 2.0 / 3,
                          -std::cos(x),            std::sin(x),            std::cos(x),
                          -std::sin(x),            -std::cos(x),           std::sin(x)};
  for (int n = 1; n <= 4; ++n) {
    CHECK(eval(R[n], jet) == doctest::Approx(oracle::substitute(R[n], jet)).epsilon(1e-14));
  }
}

TEST_CASE("recursion checked numerically along a sampled function") {
  // d/dx R_3(u(x)) against the operator applied to R_2, both from the
  // analytic jet of u = exp(x/2) cos(x)
  const auto R = gelfand_dikii(3);
  auto jet_at = [](double x, int order) {
    std::vector<double> j;
    for (int k = 0; k <= order; ++k) {
      // derivative k of Re(exp((1/2 + i) x))
      const double mod = std::pow(std::sqrt(1.25), k);
      const double arg = k * std::atan2(1.0, 0.5);
      j.push_back(mod * std::exp(0.5 * x) * std::cos(x + arg));
    }
    return j;
  };
  const double x = 0.3;
  const auto R3 = [&](double s) { return eval(R[3], jet_at(s, 4)); };
  const double lhs = oracle::first_difference(R3, x, 1e-3);
  const double rhs = eval(gd_operator(R[2]), jet_at(x, 5));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("rescale multiplies by amplitude^degree / scale^order") {
  const DiffPoly p = u(2) + c(3) * u() * u();
  const DiffPoly s = rescale(p, Rational(2), Rational(3));
  CHECK(s.coefficient(Monomial({2})) == Rational(2, 9));
  CHECK(s.coefficient(Monomial({0, 0})) == Rational(12));
}

TEST_CASE("json form") {
  const auto j = to_json(gelfand_dikii(2)[2]);
  REQUIRE(j.size() == 2);
  bool found = false;
  for (const auto& t : j) {
    if (t["orders"] == nlohmann::json::array({2})) {
      CHECK(t["num"] == "1");
      CHECK(t["den"] == "8");
      found = true;
    }
  }
  CHECK(found);
}
