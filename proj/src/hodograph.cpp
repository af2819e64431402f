#include "hsreg/hodograph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "hsreg/errors.hpp"

namespace hsreg::hodograph {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kFoldTol = 1e-6;

// d^j/dv^j of v^k
double power_derivative(int k, int j, double v) {
  if (j > k) return 0.0;
  double falling = 1.0;
  for (int i = 0; i < j; ++i) falling *= k - i;
  return falling * std::pow(v, k - j);
}

constexpr int kCachedOrders = 64;

// binom(2k, k) / 4^k in double precision for small k
double r_leading(int k) {
  static const auto table = [] {
    std::array<double, kCachedOrders> t{};
    for (int i = 0; i < kCachedOrders; ++i) t[static_cast<std::size_t>(i)] = to_double(r_coeff_exact(i));
    return t;
  }();
  if (k >= 0 && k < kCachedOrders) return table[static_cast<std::size_t>(k)];
  return to_double(r_coeff_exact(k));
}

}  // namespace

KdVTimes finger25_times(double x, double t1) { return KdVTimes{x, {t1, 0.0, 2.0 / 7.0}}; }

Rational r_coeff_exact(int k) {
  if (k < 0) throw DomainError("r_coeff: negative index");
  const auto uk = static_cast<unsigned>(k);
  return binomial(2 * uk, uk) / pow(Rational(4), uk);
}

double r_coeff(int k, double v) { return r_leading(k) * std::pow(v, k); }

Rational c_coeff_exact(int j, int r) {
  if (j < 1 || r < 0) throw DomainError("c_coeff: requires j >= 1 and r >= 0");
  if (j < r) return Rational(0);
  // coefficient of w^{j-r} in (1 - w)^{-(2r+1)/2}
  const int n = j - r;
  const Rational a(2 * r + 1, 2);
  Rational coeff(1);
  for (int i = 0; i < n; ++i) coeff *= (a + i) / Rational(i + 1);
  return Rational(2 * j + 1) * coeff;
}

double c_coeff(int j, int r, double v) { return to_double(c_coeff_exact(j, r)) * std::pow(v, j - r); }

double eval_dH(const KdVTimes& times, double v, int j) {
  if (j < 0) throw DomainError("eval_dH: negative derivative order");
  double sum = j == 0 ? times.x : 0.0;
  for (std::size_t i = 0; i < times.t.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (times.t[i] == 0.0 || j > k) continue;
    sum += (2 * k + 1) * times.t[i] * r_leading(k) * power_derivative(k, j, v);
  }
  return sum;
}

double eval_H(const KdVTimes& times, double v) { return eval_dH(times, v, 0); }

double H_scale(const KdVTimes& times, double v) {
  double sum = std::abs(times.x);
  for (std::size_t i = 0; i < times.t.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    sum += std::abs((2 * k + 1) * times.t[i] * r_coeff(k, v));
  }
  return std::max(sum, std::numeric_limits<double>::min());
}

namespace {

// Zero of dH/dv near `start` by Newton on the derivative; nullopt if it wanders off.
std::optional<double> locate_fold(const KdVTimes& times, double start, double lo, double hi) {
  double v = start;
  for (int it = 0; it < 60; ++it) {
    const double d1 = eval_dH(times, v, 1);
    const double d2 = eval_dH(times, v, 2);
    if (d2 == 0.0) return std::nullopt;
    const double step = d1 / d2;
    v -= step;
    if (!(v >= lo && v <= hi)) return std::nullopt;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(v))) return v;
  }
  return std::nullopt;
}

std::optional<double> bracket_and_bisect(const KdVTimes& times, double seed, double radius) {
  constexpr int kSamples = 400;
  const double h = radius / kSamples;
  // walk outward from the seed so the nearest sign change wins
  for (int i = 0; i < kSamples; ++i) {
    for (int dir : {+1, -1}) {
      double a = seed + dir * i * h;
      double b = seed + dir * (i + 1) * h;
      if (a > b) std::swap(a, b);
      double fa = eval_H(times, a);
      double fb = eval_H(times, b);
      if (fa == 0.0) return a;
      if (fb == 0.0) return b;
      if ((fa < 0.0) == (fb < 0.0)) continue;
      for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * std::abs(a); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = eval_H(times, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
  }
  return std::nullopt;
}

}  // namespace

double solve_branch(const KdVTimes& times, double seed) {
  if (!std::isfinite(seed)) throw DomainError("solve_branch: non-finite seed");
  const double radius = 0.5 * std::max(1.0, std::abs(seed));
  const double lo = seed - radius;
  const double hi = seed + radius;

  double v = seed;
  for (int it = 0; it < 100; ++it) {
    const double h = eval_H(times, v);
    const double scale = H_scale(times, v);
    const double dh = eval_dH(times, v, 1);
    if (std::abs(dh) < kFoldTol * scale) break;
    double step = h / dh;
    // stay inside the trust region around the seed
    while (v - step < lo || v - step > hi) step *= 0.5;
    v -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(v)) || h == 0.0) {
      if (std::abs(eval_H(times, v)) <= kResidualTol * H_scale(times, v)) return v;
      break;
    }
  }

  // Near-fold handling: a fold that touches zero is itself the root.
  std::optional<double> fold;
  for (double start : {seed, v}) {
    fold = locate_fold(times, start, lo, hi);
    if (fold) break;
  }
  if (fold && std::abs(eval_H(times, *fold)) <= kResidualTol * H_scale(times, *fold)) return *fold;

  if (auto root = bracket_and_bisect(times, seed, radius)) {
    if (std::abs(eval_H(times, *root)) <= kResidualTol * H_scale(times, *root)) return *root;
  }
  if (fold) {
    throw DerivativeVanishes(
        fmt::format("solve_branch: branch folds at v = {:.17g} (x = {:.17g}) and has no real root nearby", *fold,
                    times.x));
  }
  throw NoConvergence(fmt::format("solve_branch: no root near seed {:.17g} (x = {:.17g})", seed, times.x));
}

double closed_u0(double x, double t1) {
  if (!(t1 < 0.0)) throw DomainError("closed_u0: requires t1 < 0");
  const double disc = 4.0 * t1 * t1 * t1 + 5.0 * x * x;
  if (disc > 0.0 && x > 0.0) {
    throw DomainError(fmt::format("closed_u0: x = {:.17g} lies past the fold of the physical branch", x));
  }
  using cplx = std::complex<double>;
  // sqrt(5 (4 t1^3 + 5 x^2)), imaginary inside the fold
  const cplx root = disc >= 0.0 ? cplx(std::sqrt(5.0 * disc), 0.0) : cplx(0.0, std::sqrt(-5.0 * disc));
  const cplx w = root - 5.0 * x;
  const cplx w13 = std::pow(w, 1.0 / 3.0);
  const double a = std::cbrt(4.0 / 25.0);
  const double b = 2.0 * std::cbrt(2.0 / 5.0) * t1;
  const cplx u = a * w13 - b / w13;

  const double value = u.real();
  const double residual = 0.625 * value * value * value + 1.5 * t1 * value + x;
  const double scale = 0.625 * std::abs(value * value * value) + 1.5 * std::abs(t1 * value) + std::abs(x);
  if (std::abs(u.imag()) > 1e-9 * (1.0 + std::abs(value)) || std::abs(residual) > 1e-9 * std::max(scale, 1e-300)) {
    throw DomainError(fmt::format("closed_u0: branch evaluation failed at x = {:.17g}", x));
  }
  return value;
}

CriticalPoint find_critical_25(double t1) {
  if (!(t1 < 0.0)) throw DomainError("find_critical_25: requires t1 < 0");
  const double v_c = std::sqrt(-0.8 * t1);
  CriticalPoint cp;
  cp.m = 2;
  cp.v_c = v_c;
  cp.times_c = finger25_times(-t1 * v_c, t1);
  cp.c = -8.0 / (15.0 * v_c);
  return cp;
}

CriticalPoint find_critical(const KdVTimes& times, double v_seed) {
  // Unknowns (v, x). The Jacobian of (H_v, H) is [[H_vv, 0], [H_v, 1]].
  KdVTimes work = times;
  double v = v_seed;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double d1 = eval_dH(work, v, 1);
    const double d2 = eval_dH(work, v, 2);
    if (d2 == 0.0) throw DegenerateReduction("find_critical: second derivative vanishes; try another seed");
    double step = d1 / d2;
    // damping: do not increase |H_v|
    double lambda = 1.0;
    while (lambda > 1e-6 && std::abs(eval_dH(work, v - lambda * step, 1)) > std::abs(d1) && std::abs(d1) > 0.0) {
      lambda *= 0.5;
    }
    v -= lambda * step;
    if (std::abs(lambda * step) <= 1e-15 * (1.0 + std::abs(v))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergence("find_critical: Newton iteration did not converge");
  work.x = 0.0;
  work.x = -eval_H(work, v);

  CriticalPoint cp;
  cp.times_c = work;
  cp.v_c = v;
  // derivatives are compared with the size of the coefficients of H
  double scale = 0.0;
  for (std::size_t i = 0; i < work.t.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    scale += std::abs((2 * k + 1) * work.t[i]) * r_coeff(k, std::max(1.0, std::abs(v)));
  }
  int m = 2;
  const int max_order = 2 * static_cast<int>(work.t.size()) + 2;
  while (m <= max_order && std::abs(eval_dH(work, v, m)) <= 1e-9 * scale) ++m;
  if (m > max_order) throw DegenerateReduction("find_critical: all derivatives vanish");
  cp.m = m;
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  cp.c = -factorial / eval_dH(work, v, m);
  return cp;
}

double local_branch(const CriticalPoint& cp, double x) {
  const double arg = cp.c * (x - cp.x_c());
  if (cp.m % 2 == 0) {
    if (arg < 0.0) throw DomainError("local_branch: x on the wrong side of the catastrophe");
    return cp.v_c + std::pow(arg, 1.0 / cp.m);
  }
  return cp.v_c + std::copysign(std::pow(std::abs(arg), 1.0 / cp.m), arg);
}

}  // namespace hsreg::hodograph
