#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hsreg/hodograph.hpp"
#include "hsreg/multiscale.hpp"
#include "hsreg/rational.hpp"
#include "hsreg/toda.hpp"

namespace hsreg::geometry {

/// Polynomial with coefficients in ascending powers.
using Poly = std::vector<double>;
using PolyExact = std::vector<Rational>;

double eval_poly(const Poly& p, double X);

/// Non-negative part in z of sum_k (k + 1/2) t_k z^{2k-1} / sqrt(z^2 - v),
/// written in X = z^2:
///   P(X) = sum_k (k + 1/2) t_k sum_{j<k} r_j(v) X^{k-1-j}.
Poly oplus_project(const hodograph::KdVTimes& times, double v);
PolyExact oplus_project_exact(const std::vector<Rational>& t, const Rational& v);

/// Non-negative part of sum_k (k+1) t_{k+1} z^k / sqrt((z-u)^2 - 4v), the
/// prefactor of the bubble curve (t[0] is t_1).
Poly toda_project(const std::vector<double>& t, double u, double v);
PolyExact toda_project_exact(const std::vector<Rational>& t, const Rational& u, const Rational& v);

enum class CurveKind { finger, bubbles };

enum class EventKind { cusp, zero_count_change, root_coalescence };
std::string to_string(EventKind k);

struct Event {
  EventKind kind = EventKind::cusp;
  double u = 0.0;
  double x = 0.0;
};

struct InterfaceFrame {
  CurveKind kind = CurveKind::finger;
  double x = 0.0;  ///< flow abscissa (t~ for bubbles)
  double u = 0.0;
  double v = 0.0;
  Poly prefactor;
  /// Upper branch; the lower one is Y -> -Y.
  std::vector<std::pair<double, double>> samples;
  std::vector<Event> events_so_far;
};

/// Y = P(X) sqrt(X - u). Throws DomainError for X < u.
double finger_Y(const Poly& prefactor, double u, double X);

/// Samples the finger curve on [X_lo, X_hi], clustered at X = u and with the
/// real prefactor roots >= u included as exact zeros.
InterfaceFrame finger_curve(double u, const hodograph::KdVTimes& times, double X_lo, double X_hi, int n);

/// Y = 3 t3 (X + u) sqrt((X - u)^2 - 4v). Throws DomainError inside the gap
/// between the tips u -+ 2 sqrt(v).
double bubble_Y(double u, double v, double t3, double X);

/// Tips a = u - 2 sqrt(v), b = u + 2 sqrt(v); for v < 0 the tips have merged
/// and the pair is empty.
std::vector<double> bubble_tips(double u, double v);

/// Samples the real part of the bubble curve on [X_lo, X_hi], skipping the gap.
InterfaceFrame bubble_curve(double u, double v, double t3, double X_lo, double X_hi, int n);

/// Real roots of the prefactor (degree <= 2), ascending.
std::vector<double> real_roots(const Poly& p);

/// Cusps (P(u) = 0), coalescence (discriminant of P = 0) and changes in the
/// number of real roots >= u along the composite on [x_lo, x_hi]. The grid is
/// refined geometrically toward the pole image; events are bisected to
/// machine precision. A count change at the same abscissa as a coalescence is
/// part of that event and not reported separately.
std::vector<Event> detect_events(const multiscale::CompositeSolution& comp, double x_lo, double x_hi,
                                 int resolution = 10000);

struct FrameOptions {
  int samples = 400;
  double X_span = 3.0;  ///< finger frames cover [u, u + X_span]; bubbles [u - X_span, u + X_span]
  int event_resolution = 10000;
};

/// Writes frame_<i>.csv (X, Y) for each abscissa plus manifest.json and
/// returns the manifest. Abscissas past the composite domain throw OutOfRange.
nlohmann::json emit_frames(const multiscale::CompositeSolution& comp, const std::vector<double>& xs,
                           const std::filesystem::path& dir, const FrameOptions& opt = {});

/// Bubble frames along the Toda composite at the given t~ values.
nlohmann::json emit_bubble_frames(const toda::TodaInner& inner, const std::vector<double>& tts,
                                  const std::filesystem::path& dir, const FrameOptions& opt = {});

}  // namespace hsreg::geometry
