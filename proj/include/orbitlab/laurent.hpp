#pragma once

#include <map>
#include <string>

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Finite sum of c_k X^k with k ranging over all integers. Zero
/// coefficients are never stored, so equality is term-wise.
template <class Coeff>
class LaurentPoly {
 public:
  using Terms = std::map<long, Coeff>;

  LaurentPoly() = default;
  explicit LaurentPoly(const Terms& terms) {
    for (const auto& [k, c] : terms) add_term(k, c);
  }
  explicit LaurentPoly(const Polynomial<Coeff>& p) {
    const auto& c = p.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) add_term(static_cast<long>(i), c[i]);
  }

  static LaurentPoly constant(const Coeff& c) { return monomial(c, 0); }
  static LaurentPoly monomial(const Coeff& c, long power) {
    LaurentPoly out;
    out.add_term(power, c);
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coeff coeff(long k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(long power, const Coeff& c) {
    if (orbitlab::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(power, c);
    if (inserted) return;
    it->second += c;
    if (orbitlab::is_zero(it->second)) terms_.erase(it);
  }

  LaurentPoly operator-() const {
    LaurentPoly out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, Coeff(-c));
    return out;
  }
  LaurentPoly& operator+=(const LaurentPoly& rhs) {
    for (const auto& [k, c] : rhs.terms_) add_term(k, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& rhs) { return *this += -rhs; }
  LaurentPoly& operator*=(const Coeff& s) {
    LaurentPoly out;
    for (const auto& [k, c] : terms_) out.add_term(k, Coeff(c * s));
    return *this = std::move(out);
  }

  friend LaurentPoly operator+(LaurentPoly l, const LaurentPoly& r) { return l += r; }
  friend LaurentPoly operator-(LaurentPoly l, const LaurentPoly& r) { return l -= r; }
  friend LaurentPoly operator*(LaurentPoly l, const Coeff& s) { return l *= s; }
  friend LaurentPoly operator*(const Coeff& s, LaurentPoly r) { return r *= s; }
  friend LaurentPoly operator*(const LaurentPoly& l, const LaurentPoly& r) {
    LaurentPoly out;
    for (const auto& [i, a] : l.terms_) {
      for (const auto& [j, b] : r.terms_) out.add_term(i + j, Coeff(a * b));
    }
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

  friend bool operator==(const LaurentPoly& l, const LaurentPoly& r) { return l.terms_ == r.terms_; }
  friend bool operator!=(const LaurentPoly& l, const LaurentPoly& r) { return !(l == r); }

 private:
  Terms terms_;
};

using RatLaurent = LaurentPoly<Rational>;
using ScalarLaurent = LaurentPoly<Scalar>;

template <class Coeff>
LaurentPoly<Coeff> pow(const LaurentPoly<Coeff>& p, unsigned long exponent) {
  auto result = LaurentPoly<Coeff>::constant(Coeff(1));
  auto base = p;
  while (exponent > 0) {
    if (exponent & 1UL) result *= base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

/// F(phi(X)) by Horner's rule.
template <class Coeff>
LaurentPoly<Coeff> laurent_compose(const Polynomial<Coeff>& outer, const LaurentPoly<Coeff>& phi) {
  const auto& c = outer.coefficients();
  LaurentPoly<Coeff> acc;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * phi;
    acc.add_term(0, c[i]);
  }
  return acc;
}

template <class Coeff>
std::string to_string(const LaurentPoly<Coeff>& p, const std::string& var = "X") {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    append_term(out, it->second, it->first, var, first);
    first = false;
  }
  return out;
}

ScalarLaurent to_scalar_laurent(const RatLaurent& p);

}  // namespace orbitlab
