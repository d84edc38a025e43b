#include "orbitlab/rational.hpp"

#include <cctype>

#include "orbitlab/errors.hpp"

namespace orbitlab {

Rational rational_from_string(const std::string& text) {
  std::string trimmed;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) trimmed.push_back(ch);
  }
  if (trimmed.empty()) throw DomainError("empty rational literal");
  Rational q;
  if (q.set_str(trimmed, 10) != 0) {
    throw DomainError("malformed rational literal '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) throw DomainError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& base, unsigned long exponent) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::optional<Integer> exact_root(const Integer& value, unsigned long k) {
  if (k == 0) throw DomainError("zeroth root requested");
  if (sgn(value) < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_root(Integer(-value), k);
    if (!r) return std::nullopt;
    return Integer(-*r);
  }
  Integer root;
  if (mpz_root(root.get_mpz_t(), value.get_mpz_t(), k) == 0) return std::nullopt;
  return root;
}

std::vector<Rational> rational_roots_of(const Rational& c, unsigned long k) {
  if (k == 0) throw DomainError("zeroth root requested");
  if (sgn(c) == 0) return {Rational(0)};
  auto num = exact_root(c.get_num(), k);
  auto den = exact_root(c.get_den(), k);
  if (!num || !den) return {};
  Rational root(*num, *den);
  root.canonicalize();
  if (k % 2 == 1) return {root};
  return {Rational(-root), root};
}

std::optional<unsigned long> exact_log(const Integer& value, const Integer& base) {
  if (base < 2 || value < 1) return std::nullopt;
  Integer v = value;
  unsigned long e = 0;
  while (v > 1) {
    if (!mpz_divisible_p(v.get_mpz_t(), base.get_mpz_t())) return std::nullopt;
    v /= base;
    ++e;
  }
  return e;
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace orbitlab
