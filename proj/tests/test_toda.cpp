#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hsreg/diffpoly.hpp"
#include "hsreg/errors.hpp"
#include "hsreg/toda.hpp"
#include "oracles.hpp"

using namespace hsreg;
using namespace hsreg::toda;

namespace {

std::shared_ptr<const painleve::TritronqueeSolution> pi_solution() {
  static const auto sol =
      std::make_shared<const painleve::TritronqueeSolution>(painleve::integrate_tritronquee(30.0, -3.0, 1e-12));
  return sol;
}

}  // namespace

TEST_CASE("generating coefficients") {
  CHECK(toda_r_coeff(0, 0.3, 0.7) == 1.0);
  CHECK(toda_r_coeff(1, 0.3, 0.7) == doctest::Approx(0.3));
  CHECK(toda_r_coeff(2, 0.3, 0.7) == doctest::Approx(0.09 + 1.4));
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational u(num(rng), den(rng)), v(num(rng), den(rng));
    const auto series = oracle::toda_series(u, v, 9);
    const auto rec = oracle::toda_recurrence(to_double(u), to_double(v), 8);
    for (int k = 0; k <= 8; ++k) {
      CAPTURE(k);
      CHECK(toda_r_coeff_exact(k, u, v) == series[k]);
      CHECK(toda_r_coeff(k, to_double(u), to_double(v)) ==
            doctest::Approx(rec[k]).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK_THROWS_AS(toda_r_coeff(-1, 0.0, 0.0), DomainError);
}

TEST_CASE("hodograph pair") {
  const TodaTimes tt{-3.0, 1.0, 1.0};
  const auto [r1, r2] = toda_hodograph_residual(tt, 0.2, 0.3);
  CHECK(r1 == doctest::Approx(-3.0 + 3.0 * (0.04 + 0.6)));
  CHECK(r2 == doctest::Approx(6.0 * 0.2 * 0.3 + 1.0));
  // first equation: t + 3 t3 r_2 with r_2 = u^2 + 2v
  CHECK(r1 == doctest::Approx(tt.t + 3.0 * tt.t3 * toda_r_coeff(2, 0.2, 0.3)));

  // elimination oracle: v = -(t + 3 t3 u^2)/(6 t3) turns the pair into a cubic in u
  const auto cp = find_toda_critical(1.0, 1.0);
  const double t = cp.t_c - 0.5;
  const auto [u, v] = solve_toda_hodograph(TodaTimes{t, 1.0, 1.0}, {cp.u_c - 0.3, cp.v_c});
  const auto [e1, e2] = toda_hodograph_residual(TodaTimes{t, 1.0, 1.0}, u, v);
  CHECK(std::abs(e1) < 1e-12);
  CHECK(std::abs(e2) < 1e-12);
  auto cubic = [&](double s) { return -s * (t + 3.0 * s * s) + 1.0; };
  const double ref = oracle::bisect(cubic, u - 0.05, u + 0.05);
  CHECK(u == doctest::Approx(ref).epsilon(1e-12));
  CHECK(v == doctest::Approx(-(t + 3.0 * ref * ref) / 6.0).epsilon(1e-12));

  // well before t_c there are two real branches selected by the seed
  const auto [ua, va] = solve_toda_hodograph(TodaTimes{t, 1.0, 1.0}, {cp.u_c - 0.3, cp.v_c});
  const auto [ub, vb] = solve_toda_hodograph(TodaTimes{t, 1.0, 1.0}, {cp.u_c + 0.3, cp.v_c});
  CHECK(std::abs(ua - ub) > 0.1);
  (void)va;
  (void)vb;
}

TEST_CASE("critical point identities") {
  for (double t3 : {0.5, 1.0, 2.0})
    for (double xc : {1.0, -1.0}) {
      const auto cp = find_toda_critical(t3, xc);
      CHECK(std::abs(4 * cp.t_c * cp.t_c * cp.t_c + 81 * t3 * xc * xc) < 1e-12);
      CHECK(cp.v_c == doctest::Approx(cp.u_c * cp.u_c).epsilon(1e-15));
      CHECK(std::abs(cp.t_c + 9 * t3 * cp.u_c * cp.u_c) < 1e-14);
      CHECK(std::abs(6 * t3 * std::pow(cp.u_c, 3) + xc) < 1e-14);
    }
  const auto one = find_toda_critical(1.0, -6.0);
  CHECK(one.u_c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.t_c == doctest::Approx(-9.0).epsilon(1e-15));
  CHECK(find_toda_critical(8.0, 1.0).u_c == doctest::Approx(0.5 * find_toda_critical(1.0, 1.0).u_c).epsilon(1e-15));
  CHECK_THROWS_AS(find_toda_critical(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(find_toda_critical(1.0, 0.0), DomainError);
  const auto cp = find_toda_critical(1.0, 1.0);
  CHECK_THROWS_AS(solve_toda_hodograph(TodaTimes{cp.t_c + 1e-3, 1.0, 1.0}, {cp.u_c, cp.v_c}), SingularJacobian);
}

TEST_CASE("inner equation maps exactly onto Painleve I") {
  // V'' + 6V^2 = -a t~ with V = -a^{2/5} W(xi), t~ = -a^{-1/5} xi, for a with
  // rational fifth root; dividing by the W'' coefficient leaves W'' - 6W^2 + xi
  using diffpoly::DiffPoly;
  using diffpoly::Monomial;
  for (const Rational& root : {Rational(2), Rational(1, 3), Rational(-5, 2)}) {
    const Rational a = pow(root, 5);
    const DiffPoly lhs = DiffPoly::field(2) + diffpoly::scale(DiffPoly::field(0) * DiffPoly::field(0), Rational(6));
    const DiffPoly w = diffpoly::rescale(lhs, -root * root, -Rational(1) / root);
    // forcing: -a t~ = a^{4/5} xi moves to the left as -a^{4/5} xi
    const Rational lead = w.coefficient(Monomial({2}));
    const Rational xi_coef = -pow(root, 4) / lead;
    CHECK(w.coefficient(Monomial({2})) / lead == Rational(1));
    CHECK(w.coefficient(Monomial({0, 0})) / lead == Rational(-6));
    CHECK(xi_coef == Rational(1));
  }
  // the far field of V2 maps onto -sqrt(xi/6)
  const auto cp = find_toda_critical(1.0, -1.0);
  const TodaInner inner(cp, 1e-5, pi_solution());
  for (double tt : {-10.0, -100.0}) {
    const double xi = inner.xi_of(tt);
    const double mapped = -std::pow(inner.a(), 0.4) * -std::sqrt(xi / 6.0);
    CHECK(mapped == doctest::Approx(cp.u_c / 3.0 * std::sqrt(-tt / cp.t3)).epsilon(1e-13));
  }
}

TEST_CASE("inner solution far field") {
  for (double t3 : {0.5, 1.0, 2.0})
    for (double xc : {1.0, -1.0}) {
      const auto cp = find_toda_critical(t3, xc);
      const TodaInner inner(cp, 1e-5, pi_solution());
      const double tt = inner.tt_of(25.0);
      const double asym = std::abs(cp.u_c) / 3.0 * std::sqrt(-tt / t3);
      CHECK(std::abs(inner.V2(tt) / asym - 1.0) < 1e-3);
      CHECK(inner.V2_asymptotic(tt) == doctest::Approx(asym));
    }
  CHECK_THROWS_AS(TodaInner(find_toda_critical(-1.0, 1.0), 1e-5, pi_solution()), DomainError);
}

TEST_CASE("leading-order relations by finite differences") {
  const auto cp = find_toda_critical(1.0, 1.0);
  const TodaInner inner(cp, 1e-5, pi_solution());
  auto V = [&](double tt) { return inner.V2(tt); };
  for (double tt : {-5.0, -1.0, 0.0, 1.5}) {
    CAPTURE(tt);
    CHECK(inner.U2(tt) == doctest::Approx(-inner.V2(tt) / cp.u_c).epsilon(1e-15));
    const double Vt = oracle::first_difference(V, tt, 1e-3);
    CHECK(std::abs(inner.V2_t(tt) - Vt) < 1e-6);
    // x~ derivative at fixed t~ through s = x~ - u_c t~
    CHECK(std::abs(inner.U3(tt) - (-(-Vt / cp.u_c) / (2 * cp.u_c))) < 1e-6);
    const double Vtt = oracle::second_difference(V, tt, 1e-2);
    CHECK(std::abs(inner.V2_tt(tt) - Vtt) < 1e-6);
    // inner equation V_tt + 6 V^2 = -a t~
    CHECK(std::abs(Vtt + 6 * V(tt) * V(tt) + inner.a() * tt) < 1e-6);
    const double combo = 0.5 * (-tt / (3 * cp.t3) - std::pow(inner.U2(tt), 2) - 0.5 * Vtt / (cp.u_c * cp.u_c));
    CHECK(std::abs(inner.V4_plus_uc_U4(tt) - combo) < 1e-6);
  }
}

TEST_CASE("composite against the outer branch") {
  for (double xc : {1.0, -1.0}) {
    const auto cp = find_toda_critical(1.0, xc);
    const TodaInner inner(cp, 1e-5, pi_solution());
    const auto [u, v] = toda_composite(inner, -1e9);
    (void)v;
    // u ~ u_c - (1/3) sqrt((t_c - t)/t3) on the matched branch, with the sign of u_c
    const double dt = std::pow(inner.eps_t(), 4) * 1e9;
    const double expected = cp.u_c - std::copysign(1.0, cp.u_c) / 3.0 * std::sqrt(dt / cp.t3);
    CHECK(std::abs(u - expected) < 1e-3 * std::abs(u - cp.u_c));
  }
  // o(eps_t^2) matching on t~ in -eps_t^{-1} [1, 2]
  const auto cp = find_toda_critical(1.0, 1.0);
  double prev = 1.0;
  for (double eps : {1e-4, 1e-5, 1e-6}) {
    const TodaInner inner(cp, eps, pi_solution());
    const double e2 = inner.eps_t() * inner.eps_t();
    const double err = toda_matching_error(inner, -2.0 / inner.eps_t(), -1.0 / inner.eps_t(), 50) / e2;
    CAPTURE(eps);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("shift equations on the composite") {
  const auto cp = find_toda_critical(1.0, 1.0);
  const double e1 = [&] {
    const TodaInner inner(cp, 1e-5, pi_solution());
    const auto r = shift_residual(inner, -2.0);
    return std::max(std::abs(r.first), std::abs(r.second)) / std::pow(inner.eps_t(), 3);
  }();
  const double e2 = [&] {
    const TodaInner inner(cp, 1e-7, pi_solution());
    const auto r = shift_residual(inner, -2.0);
    return std::max(std::abs(r.first), std::abs(r.second)) / std::pow(inner.eps_t(), 3);
  }();
  CHECK(e1 < 1.0);
  CHECK(e2 < 1.0);
  CHECK_THROWS_AS(toda_outer(TodaInner(cp, 1e-5, pi_solution()), 1.0), DomainError);
}
