#include "hsreg/rational.hpp"

#include <cmath>

namespace hsreg {

namespace mp = boost::multiprecision;

Rational binomial(unsigned n, unsigned k) {
  if (k > n) return Rational(0);
  Integer acc = 1;
  for (unsigned i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;
  }
  return Rational(acc);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational acc(1);
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) acc *= b;
    b *= b;
    exponent >>= 1u;
  }
  return acc;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string numerator_string(const Rational& r) { return mp::numerator(r).str(); }
std::string denominator_string(const Rational& r) { return mp::denominator(r).str(); }

std::string to_string(const Rational& r) {
  const Integer den = mp::denominator(r);
  if (den == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + den.str();
}

namespace {

std::optional<Integer> integer_root(const Integer& value, unsigned n) {
  if (value < 0) {
    if (n % 2 == 0) return std::nullopt;
    auto r = integer_root(-value, n);
    if (!r) return std::nullopt;
    return Integer(-*r);
  }
  if (value < 2) return value;
  // floating estimate, then exact correction in a small window
  const double approx = std::pow(value.convert_to<double>(), 1.0 / n);
  Integer guess = Integer(static_cast<long long>(std::llround(approx)));
  for (Integer cand = guess > 2 ? guess - 2 : Integer(0); cand <= guess + 2; ++cand) {
    Integer p = mp::pow(cand, n);
    if (p == value) return cand;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Rational> exact_root(const Rational& r, unsigned n) {
  if (n == 0) return std::nullopt;
  auto num = integer_root(mp::numerator(r), n);
  auto den = integer_root(mp::denominator(r), n);
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

}  // namespace hsreg
