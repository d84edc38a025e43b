#pragma once

#include <optional>
#include <vector>

#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Result of centering (and, when possible, making monic) by conjugation.
struct CenteredForm {
  RatPoly g;       ///< conjugate(f, ell)
  LinearMap ell;
  bool monic;      ///< false when lc(f) has no rational (deg-1)-th root
};

/// Conjugates f so that its X^(n-1) coefficient vanishes, then scales to a
/// monic polynomial if lc(f) is an (n-1)-th power in Q. Requires deg f >= 2.
CenteredForm monic_centered(const RatPoly& f);

/// f = outer o P o inner for linear outer and inner.
struct LinearPair {
  LinearMap outer;
  LinearMap inner;
};

/// All solutions of F = outer o P o inner with deg F = deg P >= 1.
///
/// When the constraint equations leave the inner slope free, `family` is set:
/// every nonzero a gives the solution inner = aX + (b_slope*a + b_offset), and
/// `solutions` holds the representative a = 1 (and a = -1).
struct EquivalenceSet {
  bool family = false;
  Rational b_slope = 0;
  Rational b_offset = 0;
  std::vector<LinearPair> solutions;
};

EquivalenceSet equivalences_to(const RatPoly& F, const RatPoly& P);

enum class FormKind { Power, Cheb };

/// h = l1 o form o l2 where form is X^n or T_n.
struct LinearEquivalence {
  FormKind form;
  unsigned long n;
  LinearMap l1;
  LinearMap l2;

  RatPoly form_poly() const;
};

/// Decides whether h is linearly equivalent to X^n or T_n (power checked first).
std::optional<LinearEquivalence> linear_equivalence(const RatPoly& h);
/// Every verified Chebyshev-type equivalence (both sign choices when valid).
std::vector<LinearEquivalence> chebyshev_equivalences(const RatPoly& h);

struct NormalFormReport {
  enum class Kind { PowerLike, ChebyshevLike, General, Exceptional };

  Kind kind = Kind::General;
  unsigned long n = 0;
  Rational alpha = 0;  ///< PowerLike: conjugate(f, witness) == alpha * X^n
  int epsilon = 0;     ///< ChebyshevLike: conjugate(f, witness) == epsilon * T_n
  LinearMap witness;
  std::vector<LinearMap> alternates;  ///< further witnesses of the same kind

  /// The polynomial f is conjugate to (alpha X^n or epsilon T_n).
  RatPoly target() const;
};

const char* to_string(NormalFormReport::Kind kind);

/// PowerLike when f = gamma + c (X - gamma)^n, ChebyshevLike when some
/// rational conjugate is +-T_n, General otherwise.
NormalFormReport conjugacy_normal_form(const RatPoly& f);

/// Transfers a linear equivalence of iterate(f, n) with X^(r^n) or T_(r^n)
/// back to f. For deg f = n = 2 with a Chebyshev iterate the answer is the
/// Exceptional report, which draws no conclusion.
std::optional<NormalFormReport> iterate_root_form(const RatPoly& f, unsigned long n);

}  // namespace orbitlab
