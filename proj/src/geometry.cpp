#include "hsreg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include <fmt/format.h>

#include "hsreg/errors.hpp"

namespace hsreg::geometry {

double eval_poly(const Poly& p, double X) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * X + *it;
  return acc;
}

namespace {

template <typename T>
void trim(std::vector<T>& p) {
  while (!p.empty() && p.back() == T(0)) p.pop_back();
}

}  // namespace

Poly oplus_project(const hodograph::KdVTimes& times, double v) {
  Poly p(times.t.size(), 0.0);
  for (std::size_t i = 0; i < times.t.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const double w = (k + 0.5) * times.t[i];
    for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(k - 1 - j)] += w * hodograph::r_coeff(j, v);
  }
  trim(p);
  return p;
}

PolyExact oplus_project_exact(const std::vector<Rational>& t, const Rational& v) {
  PolyExact p(t.size(), Rational(0));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const Rational w = (Rational(k) + Rational(1, 2)) * t[i];
    for (int j = 0; j < k; ++j) {
      p[static_cast<std::size_t>(k - 1 - j)] += w * hodograph::r_coeff_exact(j) * pow(v, static_cast<unsigned>(j));
    }
  }
  trim(p);
  return p;
}

Poly toda_project(const std::vector<double>& t, double u, double v) {
  // t[i] = t_{i+1}; the term (k+1) t_{k+1} z^k uses t[k]
  Poly p(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const int k = static_cast<int>(i);
    const double w = (k + 1) * t[i];
    for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(k - 1 - j)] += w * toda::toda_r_coeff(j, u, v);
  }
  trim(p);
  return p;
}

PolyExact toda_project_exact(const std::vector<Rational>& t, const Rational& u, const Rational& v) {
  PolyExact p(t.size(), Rational(0));
  for (std::size_t i = 1; i < t.size(); ++i) {
    const int k = static_cast<int>(i);
    const Rational w = Rational(k + 1) * t[i];
    for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(k - 1 - j)] += w * toda::toda_r_coeff_exact(j, u, v);
  }
  trim(p);
  return p;
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::cusp: return "cusp";
    case EventKind::zero_count_change: return "zero-count-change";
    case EventKind::root_coalescence: return "root-coalescence";
  }
  return "unknown";
}

double finger_Y(const Poly& prefactor, double u, double X) {
  if (X < u) throw DomainError(fmt::format("finger_Y: X = {:.17g} below the branch point u = {:.17g}", X, u));
  return eval_poly(prefactor, X) * std::sqrt(X - u);
}

std::vector<double> real_roots(const Poly& p) {
  if (p.size() > 3) throw UnsupportedOrder("real_roots: prefactors above degree 2 are not supported");
  if (p.size() <= 1) return {};
  if (p.size() == 2) return {-p[0] / p[1]};
  const double a = p[2], b = p[1], c = p[0];
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  // cancellation-free pair
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q != 0.0) {
    r = {q / a, c / q};
  } else {
    r = {0.0, 0.0};
  }
  std::sort(r.begin(), r.end());
  return r;
}

namespace {

// points on [lo, hi] clustered quadratically at `anchor` (one of the ends)
std::vector<double> clustered(double lo, double hi, int n, bool anchor_low) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(anchor_low ? lo + (hi - lo) * s * s : hi - (hi - lo) * s * s);
  }
  return out;
}

void sort_samples(std::vector<std::pair<double, double>>& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first == b.first; }), s.end());
}

}  // namespace

InterfaceFrame finger_curve(double u, const hodograph::KdVTimes& times, double X_lo, double X_hi, int n) {
  if (X_lo < u) throw DomainError(fmt::format("finger_curve: X = {:.17g} below the branch point u = {:.17g}", X_lo, u));
  if (!(X_lo < X_hi) || n < 2) throw DomainError("finger_curve: need X_lo < X_hi and n >= 2");
  InterfaceFrame f;
  f.kind = CurveKind::finger;
  f.u = u;
  f.v = u;
  f.prefactor = oplus_project(times, u);
  for (double X : clustered(X_lo, X_hi, n, X_lo == u)) {
    f.samples.emplace_back(X, X == u ? 0.0 : finger_Y(f.prefactor, u, X));
  }
  if (f.prefactor.size() <= 3) {
    for (double r : real_roots(f.prefactor)) {
      if (r >= X_lo && r <= X_hi) f.samples.emplace_back(r, 0.0);
    }
  }
  sort_samples(f.samples);
  for (auto& [X, Y] : f.samples) {
    if (X == u) Y = 0.0;
  }
  return f;
}

std::vector<double> bubble_tips(double u, double v) {
  if (v < 0.0) return {};
  const double s = 2.0 * std::sqrt(v);
  return {u - s, u + s};
}

double bubble_Y(double u, double v, double t3, double X) {
  const double q = (X - u) * (X - u) - 4.0 * v;
  const auto tips = bubble_tips(u, v);
  if (!tips.empty() && X > tips[0] && X < tips[1]) {
    throw DomainError(fmt::format("bubble_Y: X = {:.17g} inside the gap between the tips", X));
  }
  if (!tips.empty() && (X == tips[0] || X == tips[1])) return 0.0;
  return 3.0 * t3 * (X + u) * std::sqrt(std::max(q, 0.0));
}

InterfaceFrame bubble_curve(double u, double v, double t3, double X_lo, double X_hi, int n) {
  if (!(X_lo < X_hi) || n < 2) throw DomainError("bubble_curve: need X_lo < X_hi and n >= 2");
  InterfaceFrame f;
  f.kind = CurveKind::bubbles;
  f.u = u;
  f.v = v;
  f.prefactor = {3.0 * t3 * u, 3.0 * t3};
  const auto tips = bubble_tips(u, v);
  auto add = [&](double X) { f.samples.emplace_back(X, bubble_Y(u, v, t3, X)); };
  if (tips.empty()) {
    for (double X : clustered(X_lo, X_hi, n, true)) add(X);
  } else {
    const double a = tips[0], b = tips[1];
    const int half = std::max(2, n / 2);
    if (X_lo < a) {
      for (double X : clustered(X_lo, std::min(a, X_hi), half, false)) add(X);
    }
    if (X_hi > b) {
      for (double X : clustered(std::max(b, X_lo), X_hi, half, true)) add(X);
    }
  }
  const double root = -u;
  if (root >= X_lo && root <= X_hi && (tips.empty() || root <= tips[0] || root >= tips[1])) {
    f.samples.emplace_back(root, 0.0);
  }
  sort_samples(f.samples);
  return f;
}

namespace {

// Bisects a change of `key` on [a, b] down to adjacent doubles.
template <typename F>
double bisect_change(F key, double a, double b) {
  const auto ka = key(a);
  for (;;) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    if (key(mid) == ka) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return b;
}

struct Probe {
  double u;
  bool cusp_sign;
  bool disc_sign;
  int count;
};

}  // namespace

std::vector<Event> detect_events(const multiscale::CompositeSolution& comp, double x_lo, double x_hi, int resolution) {
  if (resolution < 2) throw DomainError("detect_events: resolution must be at least 2");
  const double x_star = comp.x_star();
  const auto& pole = *comp.tritronquee().pole();
  // keep clear of the pole where the dense solution stops
  const double x_cap = comp.x_of(std::max(pole.xi_star + 2e-3, comp.tritronquee().xi_end() + 1e-6));
  const bool toward_pole_up = x_star > x_lo;
  double hi = x_hi;
  if (toward_pole_up) hi = std::min(hi, x_cap);
  if (!(x_lo < hi)) return {};

  const auto& times = comp.times();
  auto probe = [&](double x) {
    Probe p;
    p.u = comp.eval(x);
    const Poly P = oplus_project(times, p.u);
    if (P.size() > 3) throw UnsupportedOrder("detect_events: prefactors above degree 2 are not supported");
    p.cusp_sign = eval_poly(P, p.u) > 0.0;
    const double a = P.size() > 2 ? P[2] : 0.0;
    const double b = P.size() > 1 ? P[1] : 0.0;
    const double c = P.empty() ? 0.0 : P[0];
    p.disc_sign = a != 0.0 ? b * b - 4.0 * a * c > 0.0 : true;
    p.count = 0;
    for (double r : real_roots(P)) {
      if (r >= p.u) ++p.count;
    }
    return p;
  };

  // grid refined geometrically toward the pole image
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(resolution));
  if (toward_pole_up && x_star > hi) {
    const double d0 = x_star - x_lo;
    const double d1 = x_star - hi;
    for (int i = 0; i < resolution; ++i) {
      xs.push_back(x_star - d0 * std::pow(d1 / d0, static_cast<double>(i) / (resolution - 1)));
    }
    xs.front() = x_lo;
    xs.back() = hi;
  } else {
    for (int i = 0; i < resolution; ++i) xs.push_back(x_lo + (hi - x_lo) * i / (resolution - 1));
  }

  std::vector<Event> events;
  Probe prev = probe(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Probe cur = probe(xs[i]);
    const double a = xs[i - 1], b = xs[i];
    if (cur.cusp_sign != prev.cusp_sign) {
      const double x = bisect_change([&](double s) { return probe(s).cusp_sign; }, a, b);
      events.push_back({EventKind::cusp, comp.eval(x), x});
    }
    if (cur.disc_sign != prev.disc_sign) {
      const double x = bisect_change([&](double s) { return probe(s).disc_sign; }, a, b);
      events.push_back({EventKind::root_coalescence, comp.eval(x), x});
    }
    if (cur.count != prev.count) {
      const double x = bisect_change([&](double s) { return probe(s).count; }, a, b);
      const bool merged = std::any_of(events.begin(), events.end(), [&](const Event& e) {
        return e.kind == EventKind::root_coalescence && std::abs(e.x - x) <= 1e-12;
      });
      if (!merged) events.push_back({EventKind::zero_count_change, comp.eval(x), x});
    }
    prev = cur;
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& l, const Event& r) {
    if (l.x != r.x) return l.x < r.x;
    return static_cast<int>(l.kind) < static_cast<int>(r.kind);
  });
  return events;
}

namespace {

void write_frame(const InterfaceFrame& f, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw DomainError("emit_frames: cannot write " + file.string());
  os << "X,Y\n";
  for (const auto& [X, Y] : f.samples) os << fmt::format("{:.17g},{:.17g}\n", X, Y);
}

nlohmann::json event_json(const Event& e) { return {{"kind", to_string(e.kind)}, {"u", e.u}, {"x", e.x}}; }

}  // namespace

nlohmann::json emit_frames(const multiscale::CompositeSolution& comp, const std::vector<double>& xs,
                           const std::filesystem::path& dir, const FrameOptions& opt) {
  std::filesystem::create_directories(dir);
  std::vector<Event> events;
  if (!xs.empty()) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    for (double x : xs) comp.eval(x);  // reject out-of-domain abscissas before writing anything
    if (*lo < *hi) events = detect_events(comp, *lo, *hi, opt.event_resolution);
  }
  nlohmann::json manifest;
  manifest["kind"] = "finger";
  manifest["eps"] = comp.eps();
  manifest["x_switch"] = comp.x_switch();
  manifest["x_star"] = comp.x_star();
  manifest["frames"] = nlohmann::json::array();
  manifest["events"] = nlohmann::json::array();
  for (const auto& e : events) manifest["events"].push_back(event_json(e));

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double u = comp.eval(x);
    InterfaceFrame f = finger_curve(u, comp.times(), u, u + opt.X_span, opt.samples);
    f.x = x;
    for (const auto& e : events) {
      if (e.x <= x) f.events_so_far.push_back(e);
    }
    const std::string name = fmt::format("frame_{}.csv", i);
    write_frame(f, dir / name);
    manifest["frames"].push_back({{"index", i},
                                  {"x", x},
                                  {"u", u},
                                  {"file", name},
                                  {"events_so_far", f.events_so_far.size()}});
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  return manifest;
}

nlohmann::json emit_bubble_frames(const toda::TodaInner& inner, const std::vector<double>& tts,
                                  const std::filesystem::path& dir, const FrameOptions& opt) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["kind"] = "bubbles";
  manifest["eps"] = inner.eps();
  manifest["frames"] = nlohmann::json::array();
  manifest["events"] = nlohmann::json::array();
  for (double tt : tts) toda::toda_composite(inner, tt);
  for (std::size_t i = 0; i < tts.size(); ++i) {
    const auto [u, v] = toda::toda_composite(inner, tts[i]);
    InterfaceFrame f = bubble_curve(u, v, inner.critical().t3, u - opt.X_span, u + opt.X_span, opt.samples);
    f.x = tts[i];
    const std::string name = fmt::format("frame_{}.csv", i);
    write_frame(f, dir / name);
    nlohmann::json tips = nlohmann::json::array();
    for (double t : bubble_tips(u, v)) tips.push_back(t);
    manifest["frames"].push_back({{"index", i}, {"t_tilde", tts[i]}, {"u", u}, {"v", v}, {"tips", tips}, {"file", name}});
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  return manifest;
}

}  // namespace hsreg::geometry
