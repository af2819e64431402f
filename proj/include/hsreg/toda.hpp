#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "hsreg/painleve.hpp"
#include "hsreg/rational.hpp"

namespace hsreg::toda {

/// Times of the merging example: t = t_1, t_3, abscissa x (t_2 = 0).
struct TodaTimes {
  double t = 0.0;
  double t3 = 0.0;
  double x = 0.0;
};

struct TodaCritical {
  double t3 = 0.0;
  double u_c = 0.0;
  double v_c = 0.0;
  double t_c = 0.0;
  double x_c = 0.0;
};

/// Coefficient of z^{-k} in z / sqrt((z - u)^2 - 4v), by composing the series
/// of (1 - w)^{-1/2} with w = 2u/z - (u^2 - 4v)/z^2.
double toda_r_coeff(int k, double u, double v);
Rational toda_r_coeff_exact(int k, const Rational& u, const Rational& v);

/// Residuals of t + 3 t3 (u^2 + 2v) = 0 and 6 t3 u v + x = 0.
std::pair<double, double> toda_hodograph_residual(const TodaTimes& times, double u, double v);

/// Newton solution of the hodograph pair from `seed` = (u, v).
/// Throws SingularJacobian when the Jacobian 36 t3^2 (u^2 - v) degenerates
/// before convergence, NoConvergence otherwise.
std::pair<double, double> solve_toda_hodograph(const TodaTimes& times, std::pair<double, double> seed);

/// u_c = cbrt(-x_c / (6 t3)), v_c = u_c^2, t_c = -9 t3 u_c^2.
/// Throws DomainError for t3 = 0 or x_c = 0.
TodaCritical find_toda_critical(double t3, double x_c);

/// Leading inner correction V2 at fixed x = x_c, written in the similarity
/// variable s = x~ - u_c t~. With a = 2 u_c^2 / (3 t3) the equation
/// V'' + 6 V^2 = -a t~ maps to Painleve I under V = -a^{2/5} W, xi = -a^{1/5} t~.
class TodaInner {
 public:
  /// Requires t3 > 0 so that t~ -> -infinity maps to xi -> +infinity.
  TodaInner(TodaCritical cp, double eps, std::shared_ptr<const painleve::TritronqueeSolution> pi);

  const TodaCritical& critical() const { return cp_; }
  double eps() const { return eps_; }
  double eps_t() const { return eps_t_; }  ///< eps^{1/5}
  double a() const { return a_; }
  const painleve::TritronqueeSolution& tritronquee() const { return *pi_; }

  double xi_of(double tt) const { return -std::pow(a_, 0.2) * tt; }
  double tt_of(double xi) const { return -xi / std::pow(a_, 0.2); }
  /// Pole image in t~; the inner solution exists for t~ below it.
  double tt_star() const { return tt_of(pi_->pole()->xi_star); }

  double V2(double tt) const;
  double V2_t(double tt) const;
  double V2_tt(double tt) const;
  /// x~-derivatives through the similarity variable.
  double V2_x(double tt) const { return -V2_t(tt) / cp_.u_c; }
  double V2_xx(double tt) const { return V2_tt(tt) / (cp_.u_c * cp_.u_c); }
  double U2(double tt) const { return -V2(tt) / cp_.u_c; }
  double U3(double tt) const { return -V2_x(tt) / (2.0 * cp_.u_c); }
  /// V4 + u_c U4, the combination fixed by the order-eps_t^4 balance.
  double V4_plus_uc_U4(double tt) const;

  /// (|u_c|/3) sqrt(-t~/t3): the large negative t~ behaviour of V2.
  double V2_asymptotic(double tt) const;

 private:
  painleve::Value W_at(double xi) const;

  TodaCritical cp_;
  double eps_;
  double eps_t_;
  double a_;
  std::shared_ptr<const painleve::TritronqueeSolution> pi_;
};

/// u = u_c - (eps_t^2/u_c) V2, v = v_c + eps_t^2 V2 at t~.
std::pair<double, double> toda_composite(const TodaInner& inner, double tt);

/// Root of the hodograph pair at t = t_c + eps_t^4 t~ (x = x_c), seeded with
/// the branch that matches the inner solution.
std::pair<double, double> toda_outer(const TodaInner& inner, double tt);

/// Residuals of the shifted equations
///   t + 3 t3 (u^2 + v + v(x + eps)) = 0,  3 t3 (u + u(x - eps)) v + x = 0
/// evaluated on the composite, shifts realised through the similarity variable.
std::pair<double, double> shift_residual(const TodaInner& inner, double tt);

/// max |composite - outer| over both components on n samples of t~ in [lo, hi].
double toda_matching_error(const TodaInner& inner, double tt_lo, double tt_hi, int n);

}  // namespace hsreg::toda
