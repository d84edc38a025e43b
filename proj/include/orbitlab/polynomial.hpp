#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/errors.hpp"
#include "orbitlab/rational.hpp"
#include "orbitlab/scalar.hpp"

namespace orbitlab {

/// Dense univariate polynomial; coefficient i multiplies X^i.
///
/// The zero polynomial has no stored coefficients and degree -1; otherwise the
/// leading stored coefficient is nonzero. Coeff is Rational or Scalar.
template <class Coeff>
class Polynomial {
 public:
  using coeff_type = Coeff;

  Polynomial() = default;
  explicit Polynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Coeff> coeffs) : coeffs_(coeffs) { trim(); }

  static Polynomial constant(const Coeff& c) { return Polynomial(std::vector<Coeff>{c}); }
  static Polynomial x() { return monomial(Coeff(1), 1); }
  static Polynomial monomial(const Coeff& c, std::size_t power) {
    std::vector<Coeff> v(power + 1, Coeff(0));
    v[power] = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Coeff>& coefficients() const { return coeffs_; }

  /// Coefficient of X^i (zero beyond the degree).
  Coeff coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Coeff(0); }
  const Coeff& leading() const {
    if (coeffs_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }

  Coeff operator()(const Coeff& x) const {
    Coeff acc(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = Coeff(acc * x + coeffs_[i]);
    return acc;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& c : out.coeffs_) c = Coeff(-c);
    return out;
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Coeff(0));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Coeff(0));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& rhs) { return *this = *this * rhs; }
  Polynomial& operator*=(const Coeff& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    std::vector<Coeff> prod(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
      if (orbitlab::is_zero(lhs.coeffs_[i])) continue;
      for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
        prod[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
      }
    }
    return Polynomial(std::move(prod));
  }
  friend Polynomial operator*(Polynomial lhs, const Coeff& s) { return lhs *= s; }
  friend Polynomial operator*(const Coeff& s, Polynomial rhs) { return rhs *= s; }

  friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
    return lhs.coeffs_ == rhs.coeffs_;
  }
  friend bool operator!=(const Polynomial& lhs, const Polynomial& rhs) { return !(lhs == rhs); }

 private:
  void trim() {
    while (!coeffs_.empty() && orbitlab::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<Coeff> coeffs_;
};

using RatPoly = Polynomial<Rational>;
using ScalarPoly = Polynomial<Scalar>;

template <class Coeff>
Polynomial<Coeff> pow(const Polynomial<Coeff>& p, unsigned long exponent) {
  Polynomial<Coeff> result = Polynomial<Coeff>::constant(Coeff(1));
  Polynomial<Coeff> base = p;
  while (exponent > 0) {
    if (exponent & 1UL) result *= base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

/// outer(inner(X)), by Horner's rule.
template <class Coeff>
Polynomial<Coeff> compose(const Polynomial<Coeff>& outer, const Polynomial<Coeff>& inner) {
  const auto& c = outer.coefficients();
  Polynomial<Coeff> acc;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * inner;
    acc += Polynomial<Coeff>::constant(c[i]);
  }
  return acc;
}

/// n-fold self-composition; the 0th iterate is X.
template <class Coeff>
Polynomial<Coeff> iterate(const Polynomial<Coeff>& f, unsigned long n) {
  Polynomial<Coeff> acc = Polynomial<Coeff>::x();
  for (unsigned long i = 0; i < n; ++i) acc = compose(f, acc);
  return acc;
}

template <class Coeff>
Polynomial<Coeff> derivative(const Polynomial<Coeff>& p) {
  const auto& c = p.coefficients();
  if (c.size() <= 1) return {};
  std::vector<Coeff> d(c.size() - 1, Coeff(0));
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = Coeff(c[i] * Coeff(static_cast<long>(i)));
  return Polynomial<Coeff>(std::move(d));
}

/// Lifts a rational polynomial into scalar coefficients (no ring attached).
ScalarPoly to_scalar_poly(const RatPoly& p);
/// Inverse of to_scalar_poly; throws DomainError if a coefficient is not rational.
RatPoly to_rat_poly(const ScalarPoly& p);

/// Appends one signed term ("3*X^2", " - X", " + (t + 1)*X^-1") to `out`.
void append_term(std::string& out, const Rational& c, long power, const std::string& var, bool first);
void append_term(std::string& out, const Scalar& c, long power, const std::string& var, bool first);

/// Text form like "X^3 - 3*X" or "1/2*X^2 + 1".
std::string to_string(const RatPoly& p, const std::string& var = "X");
std::string to_string(const ScalarPoly& p, const std::string& var = "X");

/// Degree-1 polynomial aX + b with a != 0, over the rationals.
class LinearMap {
 public:
  LinearMap() : a_(1), b_(0) {}
  LinearMap(Rational a, Rational b);

  static LinearMap identity() { return {}; }
  /// Throws DomainError if p does not have degree exactly 1.
  static LinearMap from_poly(const RatPoly& p);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  Rational operator()(const Rational& x) const { return a_ * x + b_; }
  RatPoly as_poly() const { return RatPoly({b_, a_}); }
  LinearMap inverse() const;

  /// (this o inner)(X) = this(inner(X)).
  LinearMap after(const LinearMap& inner) const;

  friend bool operator==(const LinearMap& l, const LinearMap& r) {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }
  friend bool operator!=(const LinearMap& l, const LinearMap& r) { return !(l == r); }

  std::string to_string(const std::string& var = "X") const { return orbitlab::to_string(as_poly(), var); }

 private:
  Rational a_;
  Rational b_;
};

/// The functional inverse of a linear map.
inline LinearMap linear_inverse(const LinearMap& l) { return l.inverse(); }

RatPoly compose(const RatPoly& outer, const LinearMap& inner);
RatPoly compose(const LinearMap& outer, const RatPoly& inner);

/// l o f o l^{-1}.
RatPoly conjugate(const RatPoly& f, const LinearMap& l);

}  // namespace orbitlab
