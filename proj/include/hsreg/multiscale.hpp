#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hsreg/diffpoly.hpp"
#include "hsreg/hodograph.hpp"
#include "hsreg/painleve.hpp"
#include "hsreg/rational.hpp"

namespace hsreg::multiscale {

/// Zoom onto a critical point: eps_t = eps^{2/(2m+1)}, x~ = (x - x_c)/eps_t^m,
/// t~_j = (t_j - t_cj)/eps_t^m.
struct ScalingMapKdV {
  double eps = 0.0;
  int m = 2;
  double eps_t = 0.0;
  double x_c = 0.0;
  std::vector<double> t_c;

  static ScalingMapKdV make(double eps, const hodograph::CriticalPoint& cp);

  double zoom() const;  ///< eps_t^m
  double to_inner(double x) const { return (x - x_c) / zoom(); }
  double from_inner(double xt) const { return x_c + xt * zoom(); }
  double t_to_inner(int j, double t) const;
  double t_from_inner(int j, double tt) const;
};

/// A R_m(u~) + sum_j b_j t~_j + x~ = 0 for the leading correction u~.
struct LeadingODE {
  int m = 2;
  double A = 0.0;
  std::vector<double> b;  ///< b[j-1] multiplies t~_j
  std::optional<Rational> A_exact;
  std::vector<Rational> b_exact;
};

/// Floating-point construction from a critical point:
/// A = sum_j c_jm(v_c) t_cj, b_j = c_j0(v_c). Throws DegenerateReduction if A = 0.
LeadingODE build_leading_ode(const hodograph::CriticalPoint& cp);

/// Same with exact rational data (v_c and t_c given as rationals).
LeadingODE build_leading_ode_exact(int m, const Rational& v_c, const std::vector<Rational>& t_c);

/// A R_m as a differential polynomial; requires exact data.
diffpoly::DiffPoly leading_operator(const LeadingODE& ode);

/// u~ = alpha W, x~ = beta xi turning the t~ = 0 equation into W'' = 6W^2 - xi.
struct PIReduction {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<Rational> alpha_exact;
  std::optional<Rational> beta_exact;
};

/// Throws UnsupportedOrder for m != 2. Exact alpha, beta are filled in when
/// the fifth root involved is rational.
PIReduction reduce_to_pi(const LeadingODE& ode);

/// Inverse map: the multiplier A implied by a reduction (m = 2).
double multiplier_from_reduction(const PIReduction& red);

/// The t~ = 0 equation after substitution, divided by the W'' coefficient:
///   w_part(W) + xi_coeff * xi = 0.
struct NormalForm {
  diffpoly::DiffPoly w_part;
  Rational xi_coeff;
};
/// Requires exact data; throws DomainError otherwise.
NormalForm pi_normal_form(const LeadingODE& ode, const PIReduction& red);

/// Outer hodograph branch glued to the rescaled inner Painleve solution.
class CompositeSolution {
 public:
  CompositeSolution(hodograph::KdVTimes times, hodograph::CriticalPoint cp, double eps, double x_switch,
                    std::shared_ptr<const painleve::TritronqueeSolution> pi);

  const hodograph::KdVTimes& times() const { return times_; }
  const hodograph::CriticalPoint& critical() const { return cp_; }
  const ScalingMapKdV& map() const { return map_; }
  const LeadingODE& ode() const { return ode_; }
  const PIReduction& reduction() const { return red_; }
  const painleve::TritronqueeSolution& tritronquee() const { return *pi_; }
  double eps() const { return map_.eps; }
  double x_switch() const { return x_switch_; }

  double xi_of(double x) const { return map_.to_inner(x) / red_.beta; }
  double x_of(double xi) const { return map_.from_inner(red_.beta * xi); }
  /// Image of the first pole; the composite is defined for x < x_star.
  double x_star() const;

  /// Hodograph root continued from the local branch at the catastrophe.
  double outer(double x) const;
  /// v_c + eps_t alpha W(xi(x)); beyond the integrated range the 4-term
  /// series supplies W. Throws OutOfRange at or past x_star.
  double inner(double x) const;
  /// outer below x_switch, inner from x_switch on.
  double eval(double x) const;

 private:
  hodograph::KdVTimes times_;
  hodograph::CriticalPoint cp_;
  ScalingMapKdV map_;
  LeadingODE ode_;
  PIReduction red_;
  double x_switch_;
  std::shared_ptr<const painleve::TritronqueeSolution> pi_;
};

struct CompositeOptions {
  double eps = 1e-5;
  double t1 = -0.8;
  double x_switch = 0.638;
  double xi0 = 30.0;
  double tol = 1e-12;
};

/// Composite for the (2,5) finger with times t_1 and t_3 = 2/7.
CompositeSolution build_composite_25(const CompositeOptions& opt);

struct OverlapError {
  double max_abs = 0.0;
  double max_rel = 0.0;
};

/// max over n uniform samples of [lo, hi] of |outer - inner| and of the same
/// divided by |outer|.
OverlapError overlap_error(const CompositeSolution& comp, double lo, double hi, int n);

}  // namespace hsreg::multiscale
