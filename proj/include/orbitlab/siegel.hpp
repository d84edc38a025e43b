#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "orbitlab/laurent.hpp"
#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Parameters of a standard pair. Kind 1: (X^m, X^r p^m) with gcd(r, m) = 1;
/// kind 2: (X^2, (X^2+1) p^2); kind 3: (T_m, T_n) with gcd(m, n) = 1;
/// kind 4: (T_m, -T_n) with gcd(m, n) > 1; kind 5: ((X^2-1)^3, 3X^4-4X^3).
struct StandardPairParams {
  int kind = 1;
  unsigned long m = 1;
  unsigned long n = 1;
  unsigned long r = 0;
  RatPoly p = RatPoly::constant(1);
};

/// Throws DomainError when the kind constraints fail.
void validate(const StandardPairParams& params);

std::pair<RatPoly, RatPoly> standard_pair(const StandardPairParams& params);

/// Laurent polynomials phi, psi with F1(phi) = G1(psi), over `ring` (null for Q).
struct SiegelWitness {
  ScalarLaurent phi;
  ScalarLaurent psi;
  RingPtr ring;

  std::string ring_description() const;
};

SiegelWitness siegel_witness(const StandardPairParams& params);

/// T_m(phi) = -T_n(psi) with phi = X^n + X^-n, psi = (tX)^m + (tX)^-m over
/// Q[t]/(t^(mn) + 1). Holds for every m, n >= 1; the kind-4 witness is the
/// case gcd(m, n) > 1.
SiegelWitness chebyshev_sign_witness(unsigned long m, unsigned long n);

/// F(phi) == G(psi) exactly. Throws RingMismatch for incompatible rings.
bool verify_composition_identity(const ScalarPoly& F, const ScalarLaurent& phi, const ScalarPoly& G,
                                 const ScalarLaurent& psi);
bool verify_composition_identity(const RatPoly& F, const RatLaurent& phi, const RatPoly& G,
                                 const RatLaurent& psi);

/// F = E o F1 o mu and G = E o G1 o nu, where (F1, G1), or (G1, F1) when
/// `swapped`, is the standard pair described by `params`.
struct BTWitness {
  RatPoly E;
  LinearMap mu;
  LinearMap nu;
  StandardPairParams params;
  RatPoly F1;
  RatPoly G1;
  bool swapped = false;

  bool recomposes(const RatPoly& F, const RatPoly& G) const;
};

struct ClassifyCaps {
  /// Maximum number of (left factor, residual pair) candidates examined.
  std::size_t max_candidates = 64;
};

/// Semi-decision search for a standard-pair witness over Q. Returns nullopt
/// when nothing is found; throws CapExceeded when the candidate cap is hit.
std::optional<BTWitness> classify_pair(const RatPoly& F, const RatPoly& G, const ClassifyCaps& caps = {});

}  // namespace orbitlab
