#include "hsreg/diffpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hsreg/errors.hpp"

namespace hsreg::diffpoly {

Monomial::Monomial(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int k : orders_) {
    if (k < 0) throw std::invalid_argument("Monomial: negative derivative order");
  }
  std::sort(orders_.begin(), orders_.end());
}

int Monomial::order_sum() const { return std::accumulate(orders_.begin(), orders_.end(), 0); }

int Monomial::weight() const { return order_sum() + 2 * degree(); }

int Monomial::max_order() const { return orders_.empty() ? -1 : orders_.back(); }

DiffPoly DiffPoly::constant(const Rational& c) { return term(Monomial{}, c); }

DiffPoly DiffPoly::field(int k) { return term(Monomial({k}), Rational(1)); }

DiffPoly DiffPoly::term(const Monomial& m, const Rational& c) {
  DiffPoly p;
  p.accumulate(m, c);
  return p;
}

void DiffPoly::accumulate(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational DiffPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int DiffPoly::max_order() const {
  int best = -1;
  for (const auto& [m, c] : terms_) best = std::max(best, m.max_order());
  return best;
}

std::optional<int> DiffPoly::homogeneous_weight() const {
  if (terms_.empty()) return std::nullopt;
  const int w = terms_.begin()->first.weight();
  for (const auto& [m, c] : terms_) {
    if (m.weight() != w) return std::nullopt;
  }
  return w;
}

DiffPoly DiffPoly::dispersionless_part() const {
  DiffPoly out;
  for (const auto& [m, c] : terms_) {
    if (m.order_sum() == 0) out.accumulate(m, c);
  }
  return out;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& other) {
  for (const auto& [m, c] : other.terms_) accumulate(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& other) {
  for (const auto& [m, c] : other.terms_) accumulate(m, -c);
  return *this;
}

DiffPoly operator-(const DiffPoly& a) { return scale(a, Rational(-1)); }

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      std::vector<int> orders = ma.orders();
      orders.insert(orders.end(), mb.orders().begin(), mb.orders().end());
      out.accumulate(Monomial(std::move(orders)), ca * cb);
    }
  }
  return out;
}

namespace {

std::string factor_name(int k) {
  switch (k) {
    case 0: return "u";
    case 1: return "u_x";
    case 2: return "u_xx";
    case 3: return "u_xxx";
    default: return "u_" + std::to_string(k) + "x";
  }
}

std::string monomial_string(const Monomial& m) {
  std::string out;
  const auto& o = m.orders();
  for (std::size_t i = 0; i < o.size();) {
    std::size_t j = i;
    while (j < o.size() && o[j] == o[i]) ++j;
    if (!out.empty()) out += "*";
    out += factor_name(o[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace

std::string DiffPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (m.is_constant()) {
      os << hsreg::to_string(mag);
    } else if (mag == 1) {
      os << monomial_string(m);
    } else {
      os << hsreg::to_string(mag) << "*" << monomial_string(m);
    }
  }
  return os.str();
}

DiffPoly add(const DiffPoly& p, const DiffPoly& q) { return p + q; }

DiffPoly scale(const DiffPoly& p, const Rational& r) {
  DiffPoly out;
  if (r == 0) return out;
  for (const auto& [m, c] : p.terms()) out += DiffPoly::term(m, c * r);
  return out;
}

DiffPoly mul(const DiffPoly& p, const DiffPoly& q) { return p * q; }

DiffPoly derive(const DiffPoly& p) {
  DiffPoly out;
  for (const auto& [m, c] : p.terms()) {
    const auto& o = m.orders();
    for (std::size_t i = 0; i < o.size(); ++i) {
      std::vector<int> next = o;
      ++next[i];
      out += DiffPoly::term(Monomial(std::move(next)), c);
    }
  }
  return out;
}

namespace {

// Non-decreasing sequences of `length` non-negative integers summing to `total`.
void enumerate_orders(int length, int total, int min_entry, std::vector<int>& prefix,
                      std::vector<Monomial>& out) {
  if (length == 0) {
    if (total == 0) out.emplace_back(prefix);
    return;
  }
  for (int k = min_entry; k * length <= total; ++k) {
    prefix.push_back(k);
    enumerate_orders(length - 1, total - k, k, prefix, out);
    prefix.pop_back();
  }
}

// Solves M c = b over the rationals; M given column-wise as DiffPolys.
// Returns nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_columns(const std::vector<DiffPoly>& columns,
                                                   const DiffPoly& rhs) {
  std::map<Monomial, std::size_t> row_index;
  for (const auto& col : columns) {
    for (const auto& [m, c] : col.terms()) row_index.try_emplace(m, 0);
  }
  for (const auto& [m, c] : rhs.terms()) row_index.try_emplace(m, 0);
  std::size_t r = 0;
  for (auto& [m, idx] : row_index) idx = r++;

  const std::size_t rows = row_index.size();
  const std::size_t cols = columns.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
  for (std::size_t j = 0; j < cols; ++j) {
    for (const auto& [m, c] : columns[j].terms()) a[row_index[m]][j] = c;
  }
  for (const auto& [m, c] : rhs.terms()) a[row_index[m]][cols] = c;

  std::vector<std::size_t> pivot_col;
  std::size_t pr = 0;
  for (std::size_t j = 0; j < cols && pr < rows; ++j) {
    std::size_t piv = pr;
    while (piv < rows && a[piv][j] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[pr], a[piv]);
    const Rational inv = Rational(1) / a[pr][j];
    for (auto& e : a[pr]) e *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr || a[i][j] == 0) continue;
      const Rational f = a[i][j];
      for (std::size_t k = j; k <= cols; ++k) a[i][k] -= f * a[pr][k];
    }
    pivot_col.push_back(j);
    ++pr;
  }
  for (std::size_t i = pr; i < rows; ++i) {
    if (a[i][cols] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = a[i][cols];
  return x;
}

}  // namespace

DiffPoly integrate(const DiffPoly& p) {
  // derive preserves the degree and raises the order sum by one, so the
  // problem splits into independent blocks keyed by (degree, order sum).
  std::map<std::pair<int, int>, DiffPoly> blocks;
  for (const auto& [m, c] : p.terms()) {
    blocks[{m.degree(), m.order_sum()}] += DiffPoly::term(m, c);
  }

  DiffPoly result;
  for (const auto& [key, block] : blocks) {
    const auto [degree, order_sum] = key;
    if (degree == 0 || order_sum == 0) {
      throw NotExactDerivative("integrate: " + block.to_string() + " is not a total derivative");
    }
    std::vector<Monomial> candidates;
    std::vector<int> prefix;
    enumerate_orders(degree, order_sum - 1, 0, prefix, candidates);

    std::vector<DiffPoly> columns;
    columns.reserve(candidates.size());
    for (const auto& m : candidates) columns.push_back(derive(DiffPoly::term(m, Rational(1))));

    auto solution = solve_columns(columns, block);
    if (!solution) {
      throw NotExactDerivative("integrate: " + block.to_string() + " is not a total derivative");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      result += DiffPoly::term(candidates[i], (*solution)[i]);
    }
  }
  return result;
}

DiffPoly gd_next(const DiffPoly& r_n) {
  const auto w = r_n.homogeneous_weight();
  if (!w || *w % 2 != 0) {
    throw DomainError("gd_next: input is not weight-homogeneous of even weight");
  }
  const int n = *w / 2;
  const DiffPoly u = DiffPoly::field(0);
  const DiffPoly u_x = DiffPoly::field(1);
  const DiffPoly d1 = derive(r_n);
  const DiffPoly rhs = scale(derive(derive(d1)), Rational(1, 4)) + u * d1 + scale(u_x * r_n, Rational(1, 2));

  DiffPoly next;
  try {
    next = integrate(rhs);
  } catch (const NotExactDerivative& e) {
    throw std::logic_error(std::string("gd_next: recursion produced a non-exact right side: ") + e.what());
  }

  // Integration constant: the derivative-free part must be binom(2n+2, n+1) u^{n+1} / 4^{n+1}.
  const unsigned n1 = static_cast<unsigned>(n + 1);
  const DiffPoly expected =
      DiffPoly::term(Monomial(std::vector<int>(n1, 0)), binomial(2 * n1, n1) / pow(Rational(4), n1));
  if (next.dispersionless_part() != expected) {
    throw std::logic_error("gd_next: dispersionless part mismatch for R_" + std::to_string(n1));
  }
  return next;
}

std::vector<DiffPoly> gelfand_dikii(int n) {
  if (n < 0) throw DomainError("gelfand_dikii: negative index");
  std::vector<DiffPoly> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(DiffPoly::constant(Rational(1)));
  for (int k = 0; k < n; ++k) out.push_back(gd_next(out.back()));
  return out;
}

double eval(const DiffPoly& p, std::span<const double> jet) {
  const int needed = p.max_order() + 1;
  if (static_cast<int>(jet.size()) < needed) {
    throw JetTooShort("eval: jet of length " + std::to_string(jet.size()) + " but order " +
                      std::to_string(needed - 1) + " required");
  }
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double prod = to_double(c);
    for (int k : m.orders()) prod *= jet[static_cast<std::size_t>(k)];
    sum += prod;
  }
  return sum;
}

DiffPoly rescale(const DiffPoly& p, const Rational& amplitude, const Rational& x_scale) {
  if (x_scale == 0) throw DomainError("rescale: zero x scale");
  DiffPoly out;
  for (const auto& [m, c] : p.terms()) {
    Rational factor = pow(amplitude, static_cast<unsigned>(m.degree())) /
                      pow(x_scale, static_cast<unsigned>(m.order_sum()));
    out += DiffPoly::term(m, c * factor);
  }
  return out;
}

nlohmann::json to_json(const DiffPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    arr.push_back({{"orders", m.orders()}, {"num", numerator_string(c)}, {"den", denominator_string(c)}});
  }
  return arr;
}

}  // namespace hsreg::diffpoly
