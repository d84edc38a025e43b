#pragma once

#include <random>
#include <string>

#include "orbitlab/parse.hpp"
#include "orbitlab/polynomial.hpp"

namespace testing_support {

inline orbitlab::RatPoly P(const std::string& text) { return orbitlab::parse_poly(text); }
inline orbitlab::Rational Q(const std::string& text) { return orbitlab::rational_from_string(text); }

/// Deterministic generator of small random polynomials.
class PolyGen {
 public:
  explicit PolyGen(unsigned seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  orbitlab::Rational rational(long bound = 5, long den_bound = 3) {
    orbitlab::Rational q(integer(-bound, bound), integer(1, den_bound));
    q.canonicalize();
    return q;
  }

  /// Degree exactly `deg` with coefficients from rational(); nonzero leading term.
  orbitlab::RatPoly poly(int deg, long bound = 5, long den_bound = 3) {
    std::vector<orbitlab::Rational> c(deg + 1);
    for (auto& x : c) x = rational(bound, den_bound);
    while (sgn(c.back()) == 0) c.back() = rational(bound, den_bound);
    return orbitlab::RatPoly(std::move(c));
  }

  orbitlab::Rational nonzero_rational(long bound = 5, long den_bound = 3) {
    orbitlab::Rational q = rational(bound, den_bound);
    while (sgn(q) == 0) q = rational(bound, den_bound);
    return q;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace testing_support

#ifdef DOCTEST_VERSION_STR
namespace doctest {
template <>
struct StringMaker<orbitlab::RatPoly> {
  static String convert(const orbitlab::RatPoly& p) { return orbitlab::to_string(p).c_str(); }
};
template <>
struct StringMaker<orbitlab::Rational> {
  static String convert(const orbitlab::Rational& q) { return orbitlab::to_string(q).c_str(); }
};
}  // namespace doctest
#endif
