#include "orbitlab/poly_algebra.hpp"

#include <algorithm>

#include "orbitlab/errors.hpp"
#include "orbitlab/factor.hpp"

namespace orbitlab {

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {RatPoly(), a};
  std::vector<Rational> quot(a.degree() - db + 1, Rational(0));
  const Rational inv_lead = 1 / b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (sgn(rem[i]) == 0) continue;
    Rational q = rem[i] * inv_lead;
    quot[i - db] = q;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= q * b.coefficients()[j];
  }
  return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

RatPoly make_monic(const RatPoly& p) {
  if (p.is_zero()) return p;
  return p * Rational(1 / p.leading());
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly r = divmod(x, y).second;
    x = std::move(y);
    y = make_monic(r);
  }
  return make_monic(x);
}

std::vector<std::pair<RatPoly, unsigned long>> squarefree_decomposition(const RatPoly& p) {
  // Yun's algorithm.
  std::vector<std::pair<RatPoly, unsigned long>> out;
  if (p.degree() < 1) return out;
  RatPoly dp = derivative(p);
  RatPoly a = gcd(p, dp);
  RatPoly b = divmod(p, a).first;
  RatPoly c = divmod(dp, a).first;
  RatPoly d = c - derivative(b);
  for (unsigned long j = 1; b.degree() >= 1; ++j) {
    RatPoly s = gcd(b, d);
    if (s.degree() >= 1) out.emplace_back(s, j);
    b = divmod(b, s).first;
    c = divmod(d, s).first;
    d = c - derivative(b);
  }
  return out;
}

std::vector<Integer> primitive_part(const RatPoly& p) {
  std::vector<Integer> out;
  if (p.is_zero()) return out;
  Integer den = lcm_of_denominators(p.coefficients());
  Integer g = 0;
  for (const auto& c : p.coefficients()) {
    Integer v = c.get_num() * (den / c.get_den());
    out.push_back(v);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (sgn(out.back()) < 0) g = -g;
  for (auto& v : out) v /= g;
  return out;
}

unsigned long root_multiplicity(const RatPoly& p, const Rational& root) {
  if (p.is_zero()) throw DomainError("root multiplicity in the zero polynomial");
  RatPoly lin({Rational(-root), Rational(1)});
  RatPoly q = p;
  unsigned long k = 0;
  while (q.degree() >= 1) {
    auto [quot, rem] = divmod(q, lin);
    if (!rem.is_zero()) break;
    q = std::move(quot);
    ++k;
  }
  return k;
}

std::vector<Rational> rational_roots(const RatPoly& p) {
  if (p.is_zero()) throw DomainError("rational roots of the zero polynomial");
  std::vector<Rational> roots;
  if (p.degree() < 1) return roots;
  // Work with the squarefree part, split off X.
  RatPoly sq = divmod(p, gcd(p, derivative(p))).first;
  if (sgn(sq.coeff(0)) == 0) {
    roots.push_back(0);
    sq = divmod(sq, RatPoly::x()).first;
  }
  if (sq.degree() >= 1) {
    std::vector<Integer> z = primitive_part(sq);
    std::vector<Rational> zc(z.begin(), z.end());
    RatPoly zp{std::vector<Rational>(zc)};
    auto nums = positive_divisors(z.front());
    auto dens = positive_divisors(z.back());
    for (const auto& q : dens) {
      for (const auto& num : nums) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
        if (g != 1) continue;
        for (int sign : {1, -1}) {
          Rational cand(num * sign, q);
          cand.canonicalize();
          if (sgn(zp(cand)) == 0) roots.push_back(cand);
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace orbitlab
