#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace orbitlab {

/// Exact rational number, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

Rational rational_from_string(const std::string& text);
std::string to_string(const Rational& q);

Rational pow(const Rational& base, unsigned long exponent);

/// Exact k-th root of an integer, when one exists (k >= 1).
std::optional<Integer> exact_root(const Integer& value, unsigned long k);

/// All rational x with x^k == c. At most two values; sorted ascending.
std::vector<Rational> rational_roots_of(const Rational& c, unsigned long k);

/// Exact logarithm test: returns e with base^e == value (base >= 2, value >= 1).
std::optional<unsigned long> exact_log(const Integer& value, const Integer& base);

Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace orbitlab
