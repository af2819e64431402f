#include "hsreg/toda.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hsreg/errors.hpp"

namespace hsreg::toda {

namespace {

// sum_j c_{k-j} binom(k-j, j) w1^{k-2j} w2^j with c_n = binom(2n, n)/4^n,
// w1 = 2u, w2 = 4v - u^2.
template <typename T>
T r_series(int k, const T& u, const T& v) {
  if (k < 0) throw DomainError("toda_r_coeff: negative index");
  const T w1 = T(2) * u;
  const T w2 = T(4) * v - u * u;
  T sum(0);
  for (int j = 0; 2 * j <= k; ++j) {
    const auto n = static_cast<unsigned>(k - j);
    const Rational weight = binomial(2 * n, n) / pow(Rational(4), n) * binomial(n, static_cast<unsigned>(j));
    T term;
    if constexpr (std::is_same_v<T, Rational>) {
      term = weight;
    } else {
      term = to_double(weight);
    }
    for (int i = 0; i < k - 2 * j; ++i) term *= w1;
    for (int i = 0; i < j; ++i) term *= w2;
    sum += term;
  }
  return sum;
}

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

double toda_r_coeff(int k, double u, double v) { return r_series<double>(k, u, v); }

Rational toda_r_coeff_exact(int k, const Rational& u, const Rational& v) { return r_series<Rational>(k, u, v); }

std::pair<double, double> toda_hodograph_residual(const TodaTimes& times, double u, double v) {
  return {times.t + 3.0 * times.t3 * (u * u + 2.0 * v), 6.0 * times.t3 * u * v + times.x};
}

std::pair<double, double> solve_toda_hodograph(const TodaTimes& times, std::pair<double, double> seed) {
  auto [u, v] = seed;
  const double t3 = times.t3;
  if (t3 == 0.0) throw DomainError("solve_toda_hodograph: t3 must be non-zero");
  for (int it = 0; it < 100; ++it) {
    const auto [f1, f2] = toda_hodograph_residual(times, u, v);
    const double s1 = std::abs(times.t) + 3.0 * std::abs(t3) * (u * u + 2.0 * std::abs(v));
    const double s2 = 6.0 * std::abs(t3 * u * v) + std::abs(times.x);
    if (std::abs(f1) <= 1e-13 * std::max(s1, 1e-300) && std::abs(f2) <= 1e-13 * std::max(s2, 1e-300)) {
      return {u, v};
    }
    // J = 6 t3 [[u, 1], [v, u]]
    const double det = u * u - v;
    if (std::abs(det) <= 1e-10 * std::max(u * u, std::abs(v))) {
      throw SingularJacobian(fmt::format("solve_toda_hodograph: singular Jacobian at (u, v) = ({:.17g}, {:.17g})", u, v));
    }
    const double g1 = f1 / (6.0 * t3);
    const double g2 = f2 / (6.0 * t3);
    const double du = (u * g1 - g2) / det;
    const double dv = (u * g2 - v * g1) / det;
    u -= du;
    v -= dv;
    if (!std::isfinite(u) || !std::isfinite(v)) break;
  }
  throw NoConvergence("solve_toda_hodograph: Newton iteration did not converge");
}

TodaCritical find_toda_critical(double t3, double x_c) {
  if (t3 == 0.0) throw DomainError("find_toda_critical: t3 must be non-zero");
  if (x_c == 0.0) throw DomainError("find_toda_critical: x_c = 0 gives a degenerate critical point");
  TodaCritical cp;
  cp.t3 = t3;
  cp.x_c = x_c;
  cp.u_c = std::cbrt(-x_c / (6.0 * t3));
  cp.v_c = cp.u_c * cp.u_c;
  cp.t_c = -9.0 * t3 * cp.v_c;
  return cp;
}

TodaInner::TodaInner(TodaCritical cp, double eps, std::shared_ptr<const painleve::TritronqueeSolution> pi)
    : cp_(cp), eps_(eps), eps_t_(std::pow(eps, 0.2)), a_(2.0 * cp.u_c * cp.u_c / (3.0 * cp.t3)), pi_(std::move(pi)) {
  if (!(eps > 0.0)) throw DomainError("TodaInner: eps must be positive");
  if (!(cp_.t3 > 0.0)) {
    throw DomainError("TodaInner: t3 must be positive for the inner solution to match the outer branch");
  }
  if (!pi_ || !pi_->pole()) throw NoPoleInRange("TodaInner: Painleve solution with a fitted pole required");
}

painleve::Value TodaInner::W_at(double xi) const {
  if (!(xi > pi_->pole()->xi_star)) {
    throw OutOfRange(fmt::format("TodaInner: xi = {:.17g} at or past the pole", xi));
  }
  return xi > pi_->xi0() ? painleve::asymptotic_series(xi, 4) : pi_->eval(xi);
}

double TodaInner::V2(double tt) const { return -std::pow(a_, 0.4) * W_at(xi_of(tt)).W; }

double TodaInner::V2_t(double tt) const { return std::pow(a_, 0.6) * W_at(xi_of(tt)).dW; }

double TodaInner::V2_tt(double tt) const {
  const double xi = xi_of(tt);
  const double W = W_at(xi).W;
  return -std::pow(a_, 0.8) * (6.0 * W * W - xi);
}

double TodaInner::V4_plus_uc_U4(double tt) const {
  const double u2 = U2(tt);
  return 0.5 * (-tt / (3.0 * cp_.t3) - u2 * u2 - 0.5 * V2_xx(tt));
}

double TodaInner::V2_asymptotic(double tt) const { return std::abs(cp_.u_c) / 3.0 * std::sqrt(-tt / cp_.t3); }

std::pair<double, double> toda_composite(const TodaInner& inner, double tt) {
  const auto& cp = inner.critical();
  const double e2 = inner.eps_t() * inner.eps_t();
  const double V = inner.V2(tt);
  return {cp.u_c - e2 / cp.u_c * V, cp.v_c + e2 * V};
}

std::pair<double, double> toda_outer(const TodaInner& inner, double tt) {
  const auto& cp = inner.critical();
  const double dt = std::pow(inner.eps_t(), 4) * tt;
  if (!(dt < 0.0)) throw DomainError("toda_outer: the outer branch exists only for t < t_c");
  const double du = -sign(cp.u_c) / 3.0 * std::sqrt(-dt / cp.t3);
  const TodaTimes times{cp.t_c + dt, cp.t3, cp.x_c};
  return solve_toda_hodograph(times, {cp.u_c + du, cp.v_c - cp.u_c * du});
}

std::pair<double, double> shift_residual(const TodaInner& inner, double tt) {
  const auto& cp = inner.critical();
  const double et = inner.eps_t();
  // x -> x +/- eps moves s by +/- eps_t, i.e. t~ by -/+ eps_t / u_c at fixed x~
  const auto [u, v] = toda_composite(inner, tt);
  const double v_plus = toda_composite(inner, tt - et / cp.u_c).second;
  const double u_minus = toda_composite(inner, tt + et / cp.u_c).first;
  const double t = cp.t_c + std::pow(et, 4) * tt;
  return {t + 3.0 * cp.t3 * (u * u + v + v_plus), 3.0 * cp.t3 * (u + u_minus) * v + cp.x_c};
}

double toda_matching_error(const TodaInner& inner, double tt_lo, double tt_hi, int n) {
  if (n < 2 || !(tt_lo < tt_hi)) throw DomainError("toda_matching_error: need n >= 2 and lo < hi");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tt = tt_lo + (tt_hi - tt_lo) * i / (n - 1);
    const auto c = toda_composite(inner, tt);
    const auto o = toda_outer(inner, tt);
    worst = std::max({worst, std::abs(c.first - o.first), std::abs(c.second - o.second)});
  }
  return worst;
}

}  // namespace hsreg::toda
