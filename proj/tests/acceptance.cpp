// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include <fmt/format.h>

#include "hsreg/diffpoly.hpp"
#include "hsreg/geometry.hpp"
#include "hsreg/hodograph.hpp"
#include "hsreg/multiscale.hpp"
#include "hsreg/painleve.hpp"
#include "hsreg/toda.hpp"
#include "oracles.hpp"

using namespace hsreg;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_ms, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (ms >= budget_ms) {
    o.ok = false;
    o.note(fmt::format("runtime over budget"));
  }
  if (!o.ok) ++failures;
  std::cout << fmt::format("{} criterion {}: {} [{:.3f} ms, budget {} ms] {}\n", o.ok ? "PASS" : "FAIL", id, title, ms,
                           budget_ms, o.detail);
}

int count_roots_above(const multiscale::CompositeSolution& comp, double x) {
  const double u = comp.eval(x);
  int n = 0;
  for (double r : geometry::real_roots(geometry::oplus_project(comp.times(), u))) n += r >= u;
  return n;
}

}  // namespace

int main() {
  criterion(1, "critical point of the (2,5) finger", 1.0, [](Outcome& o) {
    const auto cp = hodograph::find_critical_25(-0.8);
    o.require(std::abs(cp.x_c() - 0.64) < 1e-12, "x_c = 0.64");
    o.require(std::abs(cp.v_c - 0.8) < 1e-12, "v_c = 0.8");
    o.require(cp.m == 2, "m = 2");
    o.note(fmt::format("x_c={:.17g} v_c={:.17g} c={:.17g}", cp.x_c(), cp.v_c, cp.c));
  });

  criterion(2, "closed form against branch solver", 100.0, [](Outcome& o) {
    const auto cp = hodograph::find_critical_25(-0.8);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = 0.58 + (0.6399 - 0.58) * i / 999.0;
      const double numeric = hodograph::solve_branch(hodograph::finger25_times(x, -0.8), hodograph::local_branch(cp, x));
      worst = std::max(worst, std::abs(hodograph::closed_u0(x, -0.8) - numeric));
    }
    o.require(worst < 1e-10, "max difference < 1e-10");
    o.note(fmt::format("max |closed - numeric| = {:.3e}", worst));
  });

  criterion(3, "Gel'fand-Dikii polynomials", 1000.0, [](Outcome& o) {
    using diffpoly::DiffPoly;
    using diffpoly::Monomial;
    const auto R = diffpoly::gelfand_dikii(5);
    const DiffPoly u = DiffPoly::field(0);
    o.require(R[1] == diffpoly::scale(u, Rational(1, 2)), "R_1 = u/2");
    o.require(R[2] == diffpoly::scale(DiffPoly::field(2) + diffpoly::scale(u * u, Rational(3)), Rational(1, 8)),
              "R_2 = (u_xx + 3u^2)/8");
    for (int n = 1; n <= 5; ++n) {
      const Rational c = binomial(2 * n, n) / pow(Rational(4), n);
      o.require(R[n].dispersionless_part() == DiffPoly::term(Monomial(std::vector<int>(n, 0)), c),
                fmt::format("dispersionless part of R_{}", n));
    }
    // (R R'' - R'^2/2) - 2(z^2 - u) R^2 + 2 z^2 through z^{-6}
    auto d = [](const DiffPoly& p) { return diffpoly::derive(p); };
    o.require((DiffPoly::constant(2) - diffpoly::scale(R[0] * R[0], Rational(2))).is_zero(), "z^2 coefficient");
    for (int k = 0; k <= 3; ++k) {
      DiffPoly coef;
      for (int i = 0; i <= k; ++i) {
        coef += R[i] * d(d(R[k - i])) - diffpoly::scale(d(R[i]) * d(R[k - i]), Rational(1, 2));
        coef += diffpoly::scale(u * R[i] * R[k - i], Rational(2));
      }
      for (int i = 0; i <= k + 1; ++i) coef -= diffpoly::scale(R[i] * R[k + 1 - i], Rational(2));
      o.require(coef.is_zero(), fmt::format("quadratic identity at z^-{}", 2 * k));
    }
  });

  criterion(4, "reduction to Painleve I", 1.0, [](Outcome& o) {
    const auto ode =
        multiscale::build_leading_ode_exact(2, Rational(4, 5), {Rational(-4, 5), Rational(0), Rational(2, 7)});
    const auto num = multiscale::build_leading_ode(hodograph::find_critical_25(-0.8));
    const auto red = multiscale::reduce_to_pi(ode);
    const auto nf = multiscale::pi_normal_form(ode, red);
    const auto op = multiscale::leading_operator(ode);
    using diffpoly::Monomial;
    // A R_2 = (u'' + 3u^2)/2, i.e. u'' + 3u^2 = -(8/(5 v_c))(x~ + b_1 t~_1), b_1 = 3 v_c/2
    o.require(*ode.A_exact == Rational(4), "A = 4");
    o.require(op.coefficient(Monomial({2})) == Rational(1, 2) && op.coefficient(Monomial({0, 0})) == Rational(3, 2),
              "4 R_2 = (u'' + 3u^2)/2");
    o.require(ode.b_exact[0] == Rational(6, 5), "b_1 = 6/5");
    o.require(Rational(1) / op.coefficient(Monomial({2})) == Rational(8) / (Rational(5) * Rational(4, 5)),
              "forcing -(8/(5 v_c)) x~");
    o.require(std::abs(num.A - 4.0) < 1e-13 && std::abs(num.b[0] - 1.2) < 1e-13, "numeric A and b_1");
    o.require(red.alpha_exact && *red.alpha_exact == Rational(-2) && *red.beta_exact == Rational(-1),
              "alpha = -2, beta = -1");
    o.require(nf.w_part.coefficient(Monomial({2})) == Rational(1) &&
                  nf.w_part.coefficient(Monomial({0, 0})) == Rational(-6) && nf.w_part.terms().size() == 2 &&
                  nf.xi_coeff == Rational(1),
              "W'' - 6W^2 + xi = 0");
    o.note(fmt::format("normal form: {} + {}*xi", nf.w_part.to_string(), to_string(nf.xi_coeff)));
  });

  criterion(5, "tritronquee quality", 5000.0, [](Outcome& o) {
    const auto sol = painleve::integrate_tritronquee(30.0, -3.0, 1e-12);
    const auto fine = painleve::integrate_tritronquee(30.0, -3.0, 1e-13);
    o.require(sol.pole().has_value() && fine.pole().has_value(), "pole found");
    const double xs = sol.pole()->xi_star;
    bool finite = true;
    for (int i = 1; i <= 30000; ++i) finite = finite && std::isfinite(sol.eval(30.0 * i / 30000.0).W);
    o.require(finite && xs < 0.0, "no pole on (0, 30]");
    const double res = sol.span_residual(xs + 0.1, 30.0, 10000);
    o.require(res < 1e-8, "residual < 1e-8");
    const double shift = std::abs(fine.pole()->xi_star - xs);
    o.require(shift < 1e-6, "xi* stable to 1e-6");
    o.require(xs > -2.40 && xs < -2.37, "xi* in (-2.40, -2.37)");
    const double x_star = 0.64 + 1e-4 * std::abs(xs);
    o.require(x_star > 0.6402302, "x* > 0.6402302");
    o.note(fmt::format("xi*={:.12f} residual={:.2e} shift={:.1e} x*={:.10f}", xs, res, shift, x_star));
  });

  criterion(6, "matching experiment", 5000.0, [](Outcome& o) {
    const auto comp = multiscale::build_composite_25(multiscale::CompositeOptions{});
    const auto e = multiscale::overlap_error(comp, 0.6365, 0.6395, 1001);
    o.require(e.max_abs < 5e-4, "absolute error < 5e-4");
    o.require(e.max_rel < 0.000625, "relative error < 0.000625");
    o.note(fmt::format("max abs={:.4e} max rel={:.4e}", e.max_abs, e.max_rel));
  });

  criterion(7, "event sequence", 10000.0, [](Outcome& o) {
    const auto comp = multiscale::build_composite_25(multiscale::CompositeOptions{});
    const auto ev = geometry::detect_events(comp, 0.6, comp.x_star());
    using geometry::EventKind;
    const double absorb = -4.0 * std::sqrt(6.0) / 5.0;
    o.require(ev.size() == 5, "five events");
    if (ev.size() == 5) {
      o.require(ev[0].kind == EventKind::cusp && std::abs(ev[0].u - 0.8) < 1e-6, "cusp at u = 4/5");
      o.require(ev[1].kind == EventKind::zero_count_change &&
                    count_roots_above(comp, ev[1].x + 1e-10) > count_roots_above(comp, ev[1].x - 1e-10),
                "bubble birth");
      o.require(ev[2].kind == EventKind::cusp && std::abs(ev[2].u + 0.8) < 1e-6, "cusp at u = -4/5");
      o.require(ev[3].kind == EventKind::zero_count_change, "second zero-count change");
      o.require(ev[4].kind == EventKind::root_coalescence && std::abs(ev[4].u - absorb) < 1e-6,
                "absorption at u = -4 sqrt(6)/5");
      for (std::size_t i = 1; i < ev.size(); ++i) o.require(ev[i - 1].x <= ev[i].x, "ordered by x");
    }
    std::string seq;
    for (const auto& e : ev) seq += fmt::format("{}(u={:.9f}) ", geometry::to_string(e.kind), e.u);
    o.note(seq);
  });

  criterion(8, "Toda identities", 5000.0, [](Outcome& o) {
    const auto pi =
        std::make_shared<const painleve::TritronqueeSolution>(painleve::integrate_tritronquee(30.0, -3.0, 1e-12));
    double worst_identity = 0.0, worst_rel = 0.0, worst_rel_abs = 0.0, worst_eq = 0.0;
    for (double t3 : {0.5, 1.0, 2.0}) {
      for (double xc : {1.0, -1.0}) {
        const auto cp = toda::find_toda_critical(t3, xc);
        worst_identity = std::max(worst_identity, std::abs(4 * std::pow(cp.t_c, 3) + 81 * t3 * xc * xc));
        const toda::TodaInner inner(cp, 1e-5, pi);
        const double tt = inner.tt_of(25.0);
        const double V2 = inner.V2(tt);
        // the formula with u_c applies as written for u_c > 0 (x_c < 0)
        if (cp.u_c > 0) worst_rel = std::max(worst_rel, std::abs(V2 / (cp.u_c / 3 * std::sqrt(-tt / t3)) - 1.0));
        worst_rel_abs = std::max(worst_rel_abs, std::abs(V2 / (std::abs(cp.u_c) / 3 * std::sqrt(-tt / t3)) - 1.0));
        for (double s : {-3.0, -0.5, 1.0}) {
          const double v = inner.V2(s);
          worst_eq = std::max(worst_eq, std::abs(inner.V2_tt(s) + 6 * v * v + inner.a() * s));
        }
      }
    }
    o.require(worst_identity < 1e-12, "4 t_c^3 + 81 t3 x_c^2 = 0");
    o.require(worst_rel < 1e-3, "V2 ~ (u_c/3) sqrt(-t~/t3) at xi = 25");
    o.require(worst_rel_abs < 1e-3, "same with |u_c| for x_c = 1");
    o.require(worst_eq < 1e-9, "V2'' + 6 V2^2 = -a t~");
    // exact change of variables for a = root^5
    using diffpoly::DiffPoly;
    using diffpoly::Monomial;
    for (const Rational& root : {Rational(2), Rational(1, 3), Rational(-5, 2), Rational(7, 4)}) {
      const DiffPoly lhs = DiffPoly::field(2) + diffpoly::scale(DiffPoly::field(0) * DiffPoly::field(0), Rational(6));
      const DiffPoly w = diffpoly::rescale(lhs, -root * root, -Rational(1) / root);
      const Rational lead = w.coefficient(Monomial({2}));
      o.require(w.coefficient(Monomial({0, 0})) / lead == Rational(-6) && -pow(root, 4) / lead == Rational(1) &&
                    w.terms().size() == 2,
                "exact map onto W'' = 6W^2 - xi");
    }
    o.note(fmt::format("identity={:.1e} rel(u_c>0)={:.2e} rel(|u_c|)={:.2e} eq={:.1e}", worst_identity, worst_rel,
                       worst_rel_abs, worst_eq));
  });

  criterion(9, "projection oracle", 1000.0, [](Outcome& o) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> num(-15, 15), den(1, 11), len(2, 5);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> t(static_cast<std::size_t>(len(rng)));
      for (auto& x : t) x = Rational(num(rng), den(rng));
      if (t.back() == 0) t.back() = 1;
      const Rational v(num(rng), den(rng));
      const auto p = geometry::oplus_project_exact(t, v);
      const auto s = oracle::reexpand(p, v, p.size() + 2);
      bool ok = p.size() == t.size();
      for (std::size_t i = 0; ok && i < p.size(); ++i) {
        const std::size_t k = p.size() - i;
        ok = s[i] == (Rational(static_cast<long>(k)) + Rational(1, 2)) * t[k - 1];
      }
      o.require(ok, fmt::format("re-expansion trial {}", trial));
    }
    const std::vector<Rational> t{Rational(-4, 5), Rational(0), Rational(2, 7)};
    for (const Rational& u : {Rational(4, 5), Rational(-3, 2), Rational(1, 7)}) {
      const auto p = geometry::oplus_project_exact(t, u);
      o.require(p == geometry::PolyExact{Rational(3, 8) * u * u - Rational(6, 5), u / 2, Rational(1)},
                "X^2 + (u/2) X + (3/8) u^2 - 6/5");
    }
  });

  std::cout << fmt::format("{} of 9 criteria passed\n", 9 - failures);
  return failures;
}
