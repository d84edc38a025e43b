#include "orbitlab/polynomial.hpp"

#include "orbitlab/laurent.hpp"

namespace orbitlab {

namespace {

template <class Coeff>
std::string poly_string(const Polynomial<Coeff>& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& c = p.coefficients();
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (is_zero(c[i])) continue;
    append_term(out, c[i], static_cast<long>(i), var, first);
    first = false;
  }
  return out;
}

void append_monomial(std::string& out, long power, const std::string& var) {
  out += var;
  if (power != 1) out += "^" + std::to_string(power);
}

}  // namespace

void append_term(std::string& out, const Rational& c, long power, const std::string& var, bool first) {
  Rational mag = abs(c);
  if (first) {
    if (sgn(c) < 0) out += "-";
  } else {
    out += sgn(c) < 0 ? " - " : " + ";
  }
  if (power == 0) {
    out += to_string(mag);
    return;
  }
  if (mag != 1) out += to_string(mag) + "*";
  append_monomial(out, power, var);
}

void append_term(std::string& out, const Scalar& c, long power, const std::string& var, bool first) {
  if (c.is_rational()) {
    append_term(out, c.to_rational(), power, var, first);
    return;
  }
  if (!first) out += " + ";
  out += c.to_string();
  if (power != 0) {
    out += "*";
    append_monomial(out, power, var);
  }
}

ScalarPoly to_scalar_poly(const RatPoly& p) {
  std::vector<Scalar> c;
  c.reserve(p.coefficients().size());
  for (const auto& q : p.coefficients()) c.emplace_back(q);
  return ScalarPoly(std::move(c));
}

RatPoly to_rat_poly(const ScalarPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coefficients().size());
  for (const auto& s : p.coefficients()) c.push_back(s.to_rational());
  return RatPoly(std::move(c));
}

std::string to_string(const RatPoly& p, const std::string& var) { return poly_string(p, var); }
std::string to_string(const ScalarPoly& p, const std::string& var) { return poly_string(p, var); }

LinearMap::LinearMap(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  if (sgn(a_) == 0) throw DomainError("linear map with zero leading coefficient");
}

LinearMap LinearMap::from_poly(const RatPoly& p) {
  if (p.degree() != 1) throw DomainError("expected a degree-1 polynomial, got " + orbitlab::to_string(p));
  return LinearMap(p.coeff(1), p.coeff(0));
}

LinearMap LinearMap::inverse() const {
  Rational ia = 1 / a_;
  return LinearMap(ia, Rational(-b_ * ia));
}

LinearMap LinearMap::after(const LinearMap& inner) const {
  return LinearMap(Rational(a_ * inner.a_), Rational(a_ * inner.b_ + b_));
}

RatPoly compose(const RatPoly& outer, const LinearMap& inner) {
  return compose(outer, inner.as_poly());
}

RatPoly compose(const LinearMap& outer, const RatPoly& inner) {
  RatPoly out = inner * outer.a();
  out += RatPoly::constant(outer.b());
  return out;
}

RatPoly conjugate(const RatPoly& f, const LinearMap& l) {
  return compose(l, compose(f, l.inverse()));
}

ScalarLaurent to_scalar_laurent(const RatLaurent& p) {
  ScalarLaurent out;
  for (const auto& [k, c] : p.terms()) out.add_term(k, Scalar(c));
  return out;
}

}  // namespace orbitlab
