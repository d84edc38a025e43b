#pragma once

#include <string>

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Parses a polynomial in X (x also accepted): rational literals, + - * / ^,
/// parentheses and implicit multiplication such as "3X^4". Exponents must be
/// nonnegative integer literals and divisors must be nonzero constants.
/// Throws ParseError carrying the offending character offset.
RatPoly parse_poly(const std::string& text);

}  // namespace orbitlab
