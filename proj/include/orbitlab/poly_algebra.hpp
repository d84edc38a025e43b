#pragma once

#include <utility>
#include <vector>

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Euclidean division a = q*b + r with deg r < deg b. Throws DomainError if b == 0.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);

/// Monic greatest common divisor (zero when both inputs are zero).
RatPoly gcd(const RatPoly& a, const RatPoly& b);

RatPoly make_monic(const RatPoly& p);

/// Squarefree factorization p = lc * prod s_j^j with monic pairwise coprime s_j;
/// returns the nonconstant (s_j, j) pairs ordered by j.
std::vector<std::pair<RatPoly, unsigned long>> squarefree_decomposition(const RatPoly& p);

/// Distinct rational roots, ascending. Throws DomainError for the zero polynomial.
std::vector<Rational> rational_roots(const RatPoly& p);

/// Multiplicity of `root` as a root of p (0 if not a root).
unsigned long root_multiplicity(const RatPoly& p, const Rational& root);

/// Integer multiple of p with coprime integer coefficients and positive leading term.
std::vector<Integer> primitive_part(const RatPoly& p);

}  // namespace orbitlab
