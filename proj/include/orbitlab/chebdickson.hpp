#pragma once

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Normalized Chebyshev polynomial: T_n(X + 1/X) = X^n + X^-n, so T_0 = 2.
RatPoly chebyshev_t(unsigned long n);

/// Dickson polynomial: D_n(U + V, UV) = U^n + V^n, so D_n(X, 0) = X^n for n >= 1.
template <class Coeff>
Polynomial<Coeff> dickson(unsigned long n, const Coeff& a) {
  using P = Polynomial<Coeff>;
  P prev = P::constant(Coeff(2));
  if (n == 0) return prev;
  P cur = P::x();
  for (unsigned long k = 1; k < n; ++k) {
    P next = P::x() * cur - prev * a;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Classical Chebyshev polynomial C_n with C_n(cos x) = cos(nx), recovered as (1/2) T_n(2X).
RatPoly classical_chebyshev(unsigned long n);

}  // namespace orbitlab
