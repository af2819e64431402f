#pragma once

#include <optional>
#include <vector>

#include "hsreg/ode.hpp"
#include "hsreg/rational.hpp"

namespace hsreg::painleve {

struct Value {
  double W = 0.0;
  double dW = 0.0;
};

/// Coefficients q_0..q_K of the large-xi expansion
///   W = -sqrt(xi/6) * sum_k q_k s^k,  s = xi^{-5/2} / sqrt(6),
/// fixed by formal substitution into W'' = 6 W^2 - xi. q_0 = 1, q_1 = 1/8.
std::vector<Rational> series_q(int K);

/// a_k = q_k 6^{-k/2}, the coefficient of xi^{-5k/2} inside the bracket.
std::vector<double> series_a(int K);

/// K-term asymptotic expansion of the pole-free solution and its derivative.
/// Throws DomainError for xi < 10 or K outside [0, 8].
Value asymptotic_series(double xi, int K);

struct Node {
  double xi = 0.0;
  double W = 0.0;
  double dW = 0.0;
};

struct PoleFit {
  double xi_star = 0.0;
  double sigma = 0.0;    ///< fitted coefficient of (xi - xi*)^{-2}
  double spread = 0.0;   ///< max deviation among the per-node estimates
  int iterations = 0;
};

/// Numerical tritronquee solution on [xi_end, xi0], integrated downward from
/// a series seed at xi0. Immutable once built.
class TritronqueeSolution {
 public:
  using Segment = ode::Dop853<2>::Segment;

  double xi0() const { return xi0_; }
  double tol() const { return tol_; }
  /// Lowest abscissa reached (the pole trigger point or xi_min).
  double xi_end() const { return nodes_.back().xi; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool blew_up() const { return blew_up_; }
  const std::optional<PoleFit>& pole() const { return pole_; }

  /// Dense-output value. Throws OutOfRange outside [xi_end, xi0] and
  /// TooCloseToPole within 1e-3 of the fitted pole.
  Value eval(double xi) const;
  /// W'' from differentiating the dense W'.
  double second_derivative(double xi) const;

  /// max |W'' - 6W^2 + xi| over the interior nodes in [lo, hi], W'' from
  /// the interpolant.
  double node_residual(double lo, double hi) const;

  /// max over consecutive grid cells [a, b] of
  ///   |W'(b) - W'(a) - int_a^b (6W^2 - xi)|
  /// on an n-point uniform grid of [lo, hi], the integral by Gauss-Legendre
  /// quadrature on the dense W.
  double span_residual(double lo, double hi, int n) const;

 private:
  friend TritronqueeSolution integrate_tritronquee(double, double, double);
  const Segment& locate(double xi) const;

  double xi0_ = 0.0;
  double tol_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<Segment> segments_;  // in integration order (decreasing xi)
  bool blew_up_ = false;
  std::optional<PoleFit> pole_;
};

/// Integrates W'' = 6 W^2 - xi from xi0 down to xi_min with an adaptive
/// 8th-order Runge-Kutta method (rtol = atol = tol), seeded by the 4-term
/// series. Stops early when |W| > 1e6 or the step drops below 1e-13 and then
/// fits the pole. Throws SeedUnreliable for xi0 < 10, DomainError for a bad
/// tolerance or interval, StepSizeUnderflow if the step collapses while W is
/// still moderate.
TritronqueeSolution integrate_tritronquee(double xi0 = 30.0, double xi_min = -3.0, double tol = 1e-12);

/// Laurent fit W ~ (xi - xi*)^{-2} + (xi*/10)(xi - xi*)^2 + (xi - xi*)^3/6 on
/// the last 20 nodes, iterated until successive estimates agree to 1e-6.
/// Throws NoPoleInRange if the integration reached xi_min without blow-up.
PoleFit find_first_negative_pole(const TritronqueeSolution& sol);

}  // namespace hsreg::painleve
