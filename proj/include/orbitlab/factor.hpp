#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "orbitlab/rational.hpp"

namespace orbitlab {

/// Prime factorization of |n| as prime -> exponent (empty for |n| == 1).
using Factorization = std::map<Integer, unsigned long>;

/// Default trial-division bound: ORBITLAB_FACTOR_BOUND if set, else 10^6.
unsigned long default_factor_bound();

/// Factors |n| by trial division up to `trial_bound`, then Pollard-Brent rho
/// with a fixed iteration budget for any composite cofactor. Throws
/// DomainError for n == 0 and FactorizationFailure when rho gives up.
Factorization factor_integer(const Integer& n, unsigned long trial_bound = default_factor_bound());

/// All positive divisors of |n|, ascending. Throws CapExceeded past `cap`.
std::vector<Integer> positive_divisors(const Integer& n, std::size_t cap = 200000);

}  // namespace orbitlab
