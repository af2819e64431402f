#include "hsreg/multiscale.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hsreg/errors.hpp"

namespace hsreg::multiscale {

namespace {

// R_2 = k1 u'' + k2 u^2
const Rational kKappa1(1, 8);
const Rational kKappa2(3, 8);

}  // namespace

ScalingMapKdV ScalingMapKdV::make(double eps, const hodograph::CriticalPoint& cp) {
  if (!(eps > 0.0)) throw DomainError("ScalingMapKdV: eps must be positive");
  ScalingMapKdV map;
  map.eps = eps;
  map.m = cp.m;
  map.eps_t = std::pow(eps, 2.0 / (2 * cp.m + 1));
  map.x_c = cp.x_c();
  map.t_c = cp.times_c.t;
  return map;
}

double ScalingMapKdV::zoom() const { return std::pow(eps_t, m); }

double ScalingMapKdV::t_to_inner(int j, double t) const {
  const double tc = j >= 1 && static_cast<std::size_t>(j) <= t_c.size() ? t_c[static_cast<std::size_t>(j) - 1] : 0.0;
  return (t - tc) / zoom();
}

double ScalingMapKdV::t_from_inner(int j, double tt) const {
  const double tc = j >= 1 && static_cast<std::size_t>(j) <= t_c.size() ? t_c[static_cast<std::size_t>(j) - 1] : 0.0;
  return tc + tt * zoom();
}

LeadingODE build_leading_ode(const hodograph::CriticalPoint& cp) {
  LeadingODE ode;
  ode.m = cp.m;
  const auto& t = cp.times_c.t;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    ode.A += hodograph::c_coeff(j, cp.m, cp.v_c) * t[i];
    ode.b.push_back(hodograph::c_coeff(j, 0, cp.v_c));
  }
  if (ode.A == 0.0) throw DegenerateReduction("build_leading_ode: multiplier of R_m vanishes");
  return ode;
}

LeadingODE build_leading_ode_exact(int m, const Rational& v_c, const std::vector<Rational>& t_c) {
  if (m < 2) throw DomainError("build_leading_ode_exact: order must be at least 2");
  LeadingODE ode;
  ode.m = m;
  Rational A(0);
  for (std::size_t i = 0; i < t_c.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    if (j >= m) A += hodograph::c_coeff_exact(j, m) * pow(v_c, static_cast<unsigned>(j - m)) * t_c[i];
    ode.b_exact.push_back(hodograph::c_coeff_exact(j, 0) * pow(v_c, static_cast<unsigned>(j)));
    ode.b.push_back(to_double(ode.b_exact.back()));
  }
  if (A == 0) throw DegenerateReduction("build_leading_ode_exact: multiplier of R_m vanishes");
  ode.A_exact = A;
  ode.A = to_double(A);
  return ode;
}

diffpoly::DiffPoly leading_operator(const LeadingODE& ode) {
  if (!ode.A_exact) throw DomainError("leading_operator: exact multiplier required");
  const auto R = diffpoly::gelfand_dikii(ode.m);
  return diffpoly::scale(R.back(), *ode.A_exact);
}

PIReduction reduce_to_pi(const LeadingODE& ode) {
  if (ode.m != 2) {
    throw UnsupportedOrder(fmt::format("reduce_to_pi: order m = {} does not lead to Painleve I", ode.m));
  }
  if (ode.A == 0.0) throw DegenerateReduction("reduce_to_pi: zero multiplier");
  // beta^5 = -6 A k1^2 / k2, alpha = -6 k1 / (k2 beta^2)
  PIReduction red;
  const double k1 = to_double(kKappa1);
  const double k2 = to_double(kKappa2);
  const double beta5 = -6.0 * ode.A * k1 * k1 / k2;
  red.beta = std::copysign(std::pow(std::abs(beta5), 0.2), beta5);
  red.alpha = -6.0 * k1 / (k2 * red.beta * red.beta);
  if (ode.A_exact) {
    const Rational b5 = Rational(-6) * *ode.A_exact * kKappa1 * kKappa1 / kKappa2;
    if (auto beta = exact_root(b5, 5)) {
      red.beta_exact = *beta;
      red.alpha_exact = Rational(-6) * kKappa1 / (kKappa2 * *beta * *beta);
      red.beta = to_double(*red.beta_exact);
      red.alpha = to_double(*red.alpha_exact);
    }
  }
  return red;
}

double multiplier_from_reduction(const PIReduction& red) {
  const double k1 = to_double(kKappa1);
  const double k2 = to_double(kKappa2);
  return -std::pow(red.beta, 5) * k2 / (6.0 * k1 * k1);
}

NormalForm pi_normal_form(const LeadingODE& ode, const PIReduction& red) {
  if (!red.alpha_exact || !red.beta_exact) throw DomainError("pi_normal_form: exact reduction required");
  // A R_m(alpha W(y)) with x~ = beta y, plus the forcing x~ = beta xi
  const auto scaled = diffpoly::rescale(leading_operator(ode), *red.alpha_exact, *red.beta_exact);
  const Rational lead = scaled.coefficient(diffpoly::Monomial({2}));
  if (lead == 0) throw DegenerateReduction("pi_normal_form: second-derivative term vanished");
  return {diffpoly::scale(scaled, Rational(1) / lead), *red.beta_exact / lead};
}

CompositeSolution::CompositeSolution(hodograph::KdVTimes times, hodograph::CriticalPoint cp, double eps,
                                     double x_switch, std::shared_ptr<const painleve::TritronqueeSolution> pi)
    : times_(std::move(times)),
      cp_(std::move(cp)),
      map_(ScalingMapKdV::make(eps, cp_)),
      ode_(build_leading_ode(cp_)),
      red_(reduce_to_pi(ode_)),
      x_switch_(x_switch),
      pi_(std::move(pi)) {
  if (!pi_) throw DomainError("CompositeSolution: missing Painleve solution");
  if (!pi_->pole()) throw NoPoleInRange("CompositeSolution: Painleve solution has no fitted pole");
}

double CompositeSolution::x_star() const { return x_of(pi_->pole()->xi_star); }

double CompositeSolution::outer(double x) const {
  hodograph::KdVTimes t = times_;
  t.x = x;
  if (x >= cp_.x_c()) {
    if (x == cp_.x_c()) return cp_.v_c;
    throw DomainError(fmt::format("outer: x = {:.17g} lies past the catastrophe", x));
  }
  return hodograph::solve_branch(t, hodograph::local_branch(cp_, x));
}

double CompositeSolution::inner(double x) const {
  const double xi = xi_of(x);
  const double xs = pi_->pole()->xi_star;
  // the pole image bounds the domain on the side of decreasing xi
  if (!(xi > xs)) throw OutOfRange(fmt::format("inner: x = {:.17g} at or past the pole image {:.17g}", x, x_star()));
  double W;
  if (xi > pi_->xi0()) {
    W = painleve::asymptotic_series(xi, 4).W;
  } else {
    W = pi_->eval(xi).W;
  }
  return cp_.v_c + map_.eps_t * red_.alpha * W;
}

double CompositeSolution::eval(double x) const { return x < x_switch_ ? outer(x) : inner(x); }

CompositeSolution build_composite_25(const CompositeOptions& opt) {
  auto cp = hodograph::find_critical_25(opt.t1);
  auto pi = std::make_shared<const painleve::TritronqueeSolution>(
      painleve::integrate_tritronquee(opt.xi0, -3.0, opt.tol));
  return CompositeSolution(hodograph::finger25_times(cp.x_c(), opt.t1), cp, opt.eps, opt.x_switch, std::move(pi));
}

OverlapError overlap_error(const CompositeSolution& comp, double lo, double hi, int n) {
  if (n < 2 || !(lo < hi)) throw DomainError("overlap_error: need n >= 2 and lo < hi");
  OverlapError e;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double o = comp.outer(x);
    const double d = std::abs(o - comp.inner(x));
    e.max_abs = std::max(e.max_abs, d);
    e.max_rel = std::max(e.max_rel, d / std::abs(o));
  }
  return e;
}

}  // namespace hsreg::multiscale
