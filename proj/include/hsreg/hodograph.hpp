#pragma once

#include <vector>

#include "hsreg/rational.hpp"

namespace hsreg::hodograph {

/// Flow abscissa x together with deformation parameters t_1 .. t_{l+1}
/// (t[0] is t_1). Entries past the end are zero.
struct KdVTimes {
  double x = 0.0;
  std::vector<double> t;

  double time(int k) const {
    return k >= 1 && static_cast<std::size_t>(k) <= t.size() ? t[static_cast<std::size_t>(k) - 1] : 0.0;
  }
};

/// Times of the (2,5) finger: only t_1 and t_3 = 2/7 are non-zero.
KdVTimes finger25_times(double x, double t1);

struct CriticalPoint {
  int m = 2;             ///< order: first non-vanishing v-derivative of H
  KdVTimes times_c;      ///< x_c and t_c
  double v_c = 0.0;
  double c = 0.0;        ///< catastrophe constant -m! / (d^m H / dv^m)

  double x_c() const { return times_c.x; }
};

/// Coefficient of z^{-2k} in z / sqrt(z^2 - v): binom(2k,k) (v/4)^k.
double r_coeff(int k, double v);
Rational r_coeff_exact(int k);  ///< binom(2k,k) / 4^k

/// Residue (2j+1) oint dz/(2 pi i) z^{2j} (z^2 - v)^{-(2r+1)/2}, which is
/// c_coeff_exact(j, r) * v^{j-r} (zero for j < r).
double c_coeff(int j, int r, double v);
Rational c_coeff_exact(int j, int r);

/// H = sum_k (2k+1) t_k r_k(v) + x.
double eval_H(const KdVTimes& times, double v);
/// j-th derivative of H in v (j = 0 gives H itself).
double eval_dH(const KdVTimes& times, double v, int j);
/// Sum of the magnitudes of the terms of H; the natural size for residual tests.
double H_scale(const KdVTimes& times, double v);

/// Root of H(times, .) on the branch selected by `seed`.
///
/// Newton's method, kept within a trust region around the seed. When the
/// derivative degenerates the solver checks whether a nearby fold touches
/// zero and otherwise falls back to bisection on a sign change near the seed.
/// Throws DerivativeVanishes when the branch has folded away (a fold is found
/// but no root), NoConvergence when nothing usable is found.
double solve_branch(const KdVTimes& times, double seed);

/// Real root of 5/8 u^3 + 3/2 t1 u + x = 0 on the physical branch, from the
/// Cardano form evaluated with principal complex roots. Throws DomainError
/// for t1 >= 0 and past the fold (x > x_c).
double closed_u0(double x, double t1);

/// Critical point of the (2,5) finger for t1 < 0.
CriticalPoint find_critical_25(double t1);

/// Critical point for arbitrary times: damped Newton on
/// {dH/dv = 0, H = 0} in (v, x) with the t_k held fixed. The order m is the
/// first derivative that does not vanish.
CriticalPoint find_critical(const KdVTimes& times, double v_seed);

/// v_c + (c (x - x_c))^{1/m}, the leading local behavior at the catastrophe.
double local_branch(const CriticalPoint& cp, double x);

}  // namespace hsreg::hodograph
