#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsreg/rational.hpp"

namespace hsreg::diffpoly {

/// Product of x-derivatives of the single field u. Entry k stands for one
/// factor d^k u / dx^k; the empty monomial is the constant 1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> orders);

  const std::vector<int>& orders() const { return orders_; }
  bool is_constant() const { return orders_.empty(); }
  int degree() const { return static_cast<int>(orders_.size()); }
  /// Sum of (k + 2) over the factors; u carries weight 2, d/dx weight 1.
  int weight() const;
  int order_sum() const;
  /// Highest derivative order, -1 for the constant monomial.
  int max_order() const;

  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<int> orders_;  // ascending
};

/// Differential polynomial with exact rational coefficients.
/// Zero coefficients are never stored, so structural equality is equality.
class DiffPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  DiffPoly() = default;
  static DiffPoly constant(const Rational& c);
  /// The k-th derivative of the field, u^{(k)}.
  static DiffPoly field(int k = 0);
  static DiffPoly term(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;
  int max_order() const;

  /// Common weight of all monomials, or nullopt for mixed weights / zero.
  std::optional<int> homogeneous_weight() const;
  /// Terms free of derivatives (the dispersionless limit).
  DiffPoly dispersionless_part() const;

  DiffPoly& operator+=(const DiffPoly& other);
  DiffPoly& operator-=(const DiffPoly& other);

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator-(const DiffPoly& a);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend bool operator==(const DiffPoly&, const DiffPoly&) = default;

  std::string to_string() const;

 private:
  void accumulate(const Monomial& m, const Rational& c);

  Terms terms_;
};

DiffPoly add(const DiffPoly& p, const DiffPoly& q);
DiffPoly scale(const DiffPoly& p, const Rational& r);
DiffPoly mul(const DiffPoly& p, const DiffPoly& q);

/// Total x-derivative (Leibniz rule over every factor).
DiffPoly derive(const DiffPoly& p);

/// Inverse of derive with zero constant term.
/// Throws NotExactDerivative when p is not in the image of derive.
DiffPoly integrate(const DiffPoly& p);

/// One step of the Gel'fand-Dikii recursion
///   d/dx R_{n+1} = (1/4 d^3/dx^3 + u d/dx + 1/2 u_x) R_n.
/// R_n must be weight-homogeneous of weight 2n.
DiffPoly gd_next(const DiffPoly& r_n);

/// R_0 .. R_n.
std::vector<DiffPoly> gelfand_dikii(int n);

/// Evaluates p with jet[k] the value of the k-th derivative of u.
/// Throws JetTooShort when jet does not reach max_order().
double eval(const DiffPoly& p, std::span<const double> jet);

/// Substitutes u = amplitude * w(y), x = x_scale * y and returns the polynomial
/// in w: a monomial of degree d and order sum s picks up amplitude^d / x_scale^s.
DiffPoly rescale(const DiffPoly& p, const Rational& amplitude, const Rational& x_scale);

/// [{"orders": [...], "num": "...", "den": "..."}, ...]
nlohmann::json to_json(const DiffPoly& p);

}  // namespace hsreg::diffpoly
