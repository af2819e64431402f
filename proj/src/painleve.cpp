#include "hsreg/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hsreg/errors.hpp"

namespace hsreg::painleve {

namespace {

constexpr int kMaxTerms = 8;
constexpr double kBlowUp = 1e6;
constexpr double kMinStep = 1e-13;
constexpr int kFitNodes = 20;

// Gauss-Legendre nodes and weights on [-1, 1], 8 points.
constexpr double kGaussX[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr double kGaussW[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

std::vector<Rational> series_q(int K) {
  if (K < 0 || K > 64) throw DomainError("series_q: K out of range");
  std::vector<Rational> q(static_cast<std::size_t>(K) + 1);
  q[0] = 1;
  for (int n = 1; n <= K; ++n) {
    const Rational p = Rational(1, 2) - Rational(5 * (n - 1), 2);
    Rational rhs = -q[static_cast<std::size_t>(n - 1)] * p * (p - 1);
    for (int i = 1; i < n; ++i) rhs -= q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(n - i)];
    q[static_cast<std::size_t>(n)] = rhs / 2;
  }
  return q;
}

std::vector<double> series_a(int K) {
  const auto q = series_q(K);
  std::vector<double> a(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) a[k] = to_double(q[k]) * std::pow(6.0, -0.5 * static_cast<double>(k));
  return a;
}

Value asymptotic_series(double xi, int K) {
  if (K < 0 || K > kMaxTerms) throw DomainError(fmt::format("asymptotic_series: K = {} outside [0, {}]", K, kMaxTerms));
  if (!(xi >= 10.0)) throw DomainError(fmt::format("asymptotic_series: xi = {:.17g} below 10", xi));
  const auto a = series_a(K);
  // W = -6^{-1/2} sum_k a_k xi^{p_k}, p_k = 1/2 - 5k/2
  double W = 0.0;
  double dW = 0.0;
  for (int k = K; k >= 0; --k) {
    const double p = 0.5 - 2.5 * k;
    const double term = a[static_cast<std::size_t>(k)] * std::pow(xi, p);
    W += term;
    dW += p * term / xi;
  }
  const double f = -1.0 / std::sqrt(6.0);
  return {f * W, f * dW};
}

const TritronqueeSolution::Segment& TritronqueeSolution::locate(double xi) const {
  if (pole_ && std::abs(xi - pole_->xi_star) < 1e-3) {
    throw TooCloseToPole(fmt::format("tritronquee: xi = {:.17g} within 1e-3 of the pole", xi));
  }
  if (!(xi <= xi0_ && xi >= xi_end())) {
    throw OutOfRange(fmt::format("tritronquee: xi = {:.17g} outside the solved range [{:.17g}, {:.17g}]", xi,
                                 xi_end(), xi0_));
  }
  auto it = std::partition_point(segments_.begin(), segments_.end(),
                                 [xi](const Segment& s) { return s.x1() > xi; });
  if (it == segments_.end()) --it;
  return *it;
}

Value TritronqueeSolution::eval(double xi) const {
  const auto y = locate(xi).value(xi);
  return {y[0], y[1]};
}

double TritronqueeSolution::second_derivative(double xi) const { return locate(xi).derivative(xi)[1]; }

double TritronqueeSolution::node_residual(double lo, double hi) const {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.xi < lo || n.xi > hi) continue;
    // node i is the start of segment i
    const double d2 = segments_[i].derivative(n.xi)[1];
    worst = std::max(worst, std::abs(d2 - 6.0 * n.W * n.W + n.xi));
  }
  return worst;
}

double TritronqueeSolution::span_residual(double lo, double hi, int n) const {
  if (n < 2 || !(lo < hi)) throw DomainError("span_residual: need n >= 2 and lo < hi");
  double worst = 0.0;
  double a = lo;
  Value va = eval(a);
  for (int i = 1; i < n; ++i) {
    const double b = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    const Value vb = eval(b);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double integral = 0.0;
    for (int g = 0; g < 4; ++g) {
      for (double sgn : {-1.0, 1.0}) {
        const double x = mid + sgn * half * kGaussX[g];
        const double W = eval(x).W;
        integral += kGaussW[g] * (6.0 * W * W - x);
      }
    }
    integral *= half;
    worst = std::max(worst, std::abs(vb.dW - va.dW - integral));
    a = b;
    va = vb;
  }
  return worst;
}

TritronqueeSolution integrate_tritronquee(double xi0, double xi_min, double tol) {
  if (!(xi0 >= 10.0)) throw SeedUnreliable(fmt::format("integrate_tritronquee: xi0 = {:.17g} below 10", xi0));
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw DomainError(fmt::format("integrate_tritronquee: tol = {:.3g} outside [1e-13, 1e-6]", tol));
  }
  if (!(xi_min < xi0)) throw DomainError("integrate_tritronquee: xi_min must lie below xi0");

  using Solver = ode::Dop853<2>;
  const Value seed = asymptotic_series(xi0, 4);
  Solver::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  Solver solver([](double x, const Solver::State& y, Solver::State& dy) {
    dy[0] = y[1];
    dy[1] = 6.0 * y[0] * y[0] - x;
  }, xi0, {seed.W, seed.dW}, -1.0, opt);

  TritronqueeSolution sol;
  sol.xi0_ = xi0;
  sol.tol_ = tol;
  sol.nodes_.push_back({xi0, seed.W, seed.dW});

  while (solver.x() > xi_min) {
    if (!solver.step(xi_min, kMinStep)) {
      if (std::abs(solver.y()[0]) < 1e3) {
        throw StepSizeUnderflow(fmt::format("integrate_tritronquee: step size collapsed at xi = {:.17g}", solver.x()));
      }
      sol.blew_up_ = true;
      break;
    }
    sol.segments_.push_back(solver.segment());
    sol.nodes_.push_back({solver.x(), solver.y()[0], solver.y()[1]});
    if (std::abs(solver.y()[0]) > kBlowUp) {
      sol.blew_up_ = true;
      break;
    }
  }
  if (sol.blew_up_) sol.pole_ = find_first_negative_pole(sol);
  return sol;
}

namespace {

// tau > 0 with tau^-2 + (xs/10) tau^2 + tau^3/6 = W, by Newton from tau = W^{-1/2}.
double laurent_offset(double W, double xs) {
  double tau = 1.0 / std::sqrt(W);
  for (int it = 0; it < 50; ++it) {
    const double g = 1.0 / (tau * tau) + 0.1 * xs * tau * tau + tau * tau * tau / 6.0 - W;
    const double dg = -2.0 / (tau * tau * tau) + 0.2 * xs * tau + 0.5 * tau * tau;
    const double step = g / dg;
    tau -= step;
    if (std::abs(step) <= 1e-16 * tau) break;
  }
  return tau;
}

}  // namespace

PoleFit find_first_negative_pole(const TritronqueeSolution& sol) {
  if (!sol.blew_up()) {
    throw NoPoleInRange(fmt::format("find_first_negative_pole: reached xi = {:.17g} without blow-up", sol.xi_end()));
  }
  const auto& nodes = sol.nodes();
  if (nodes.size() < static_cast<std::size_t>(kFitNodes) + 1) {
    throw NoPoleInRange("find_first_negative_pole: too few nodes before blow-up");
  }
  const std::size_t first = nodes.size() - kFitNodes;
  for (std::size_t i = first; i < nodes.size(); ++i) {
    if (!(nodes[i].W > 0.0)) throw NoPoleInRange("find_first_negative_pole: blow-up is not a positive double pole");
  }

  PoleFit fit;
  // leading-order start from the closest node
  fit.xi_star = nodes.back().xi - 1.0 / std::sqrt(nodes.back().W);
  for (int it = 1; it <= 50; ++it) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = first; i < nodes.size(); ++i) {
      const double est = nodes[i].xi - laurent_offset(nodes[i].W, fit.xi_star);
      sum += est;
      lo = std::min(lo, est);
      hi = std::max(hi, est);
    }
    const double next = sum / kFitNodes;
    const double change = std::abs(next - fit.xi_star);
    fit.xi_star = next;
    fit.spread = hi - lo;
    fit.iterations = it;
    if (change < 1e-6 && it > 1) break;
    if (it == 50) throw NoConvergence("find_first_negative_pole: pole estimate did not settle");
  }
  const double tau = nodes.back().xi - fit.xi_star;
  fit.sigma = nodes.back().W * tau * tau;
  return fit;
}

}  // namespace hsreg::painleve
