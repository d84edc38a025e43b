#pragma once

#include <cstddef>

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// A real number known to lie in [value - radius, value + radius].
struct HeightValue {
  double value = 0;
  double radius = 0;
  bool exact_zero = false;  ///< set only when a cycle was found exactly
  unsigned long iterations = 0;
};

/// For every rational z: d h(z) - c_low <= h(f(z)) <= d h(z) + c_up.
struct GapConstants {
  double c_up = 0;
  double c_low = 0;
};

/// Budget on the bit length of numerators and denominators reached while
/// iterating: ORBITLAB_BIT_BUDGET if set, else 2^24.
std::size_t default_bit_budget();

/// log max(|p|, |q|) for x = p/q in lowest terms; 0 for x = 0.
double weil_height(const Rational& x);

/// Certified gap constants for deg f >= 2 (upward rounded).
GapConstants gap_constants(const RatPoly& f);

/// Canonical height of x under f (deg f >= 2) to within target_radius.
/// Throws BudgetExceeded, carrying the number of completed iterations, if an
/// iterate outgrows the bit budget first.
HeightValue canonical_height(const RatPoly& f, const Rational& x, double target_radius,
                             std::size_t bit_budget = default_bit_budget());

/// Exact decision: true iff the forward orbit of x under f is finite.
bool is_preperiodic(const RatPoly& f, const Rational& x);

/// Heights above this bound increase strictly under f, so such points wander.
double escape_threshold(const RatPoly& f);

}  // namespace orbitlab
