#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hsreg {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational binomial(unsigned n, unsigned k);
Rational pow(const Rational& base, unsigned exponent);

double to_double(const Rational& r);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);
std::string numerator_string(const Rational& r);
std::string denominator_string(const Rational& r);

/// Exact n-th root when numerator and denominator are both perfect n-th powers.
/// Negative radicands are accepted for odd n.
std::optional<Rational> exact_root(const Rational& r, unsigned n);

}  // namespace hsreg
