#pragma once

#include <memory>
#include <string>
#include <vector>

#include "orbitlab/rational.hpp"

namespace orbitlab {

/// The ring Q[t]/(m(t)) for a monic integer polynomial m of degree >= 1.
/// m need not be irreducible, so the ring may have zero divisors.
class QuotientRing {
 public:
  /// `modulus` lists m's coefficients from degree 0 upward; it must be monic
  /// with integer coefficients.
  static std::shared_ptr<const QuotientRing> make(std::vector<Rational> modulus,
                                                  std::string variable = "t");

  /// Q[t]/(t^k + 1), where t is a primitive 2k-th root of unity.
  static std::shared_ptr<const QuotientRing> negacyclic(unsigned long k);
  /// Q[t]/(t^2 - c).
  static std::shared_ptr<const QuotientRing> square_root_of(long c);

  std::size_t degree() const { return modulus_.size() - 1; }
  const std::vector<Rational>& modulus() const { return modulus_; }
  const std::string& variable() const { return variable_; }

  /// Reduces a coefficient vector modulo m and trims trailing zeros.
  void reduce(std::vector<Rational>& coeffs) const;

  /// Human-readable description such as "Q[t]/(t^6 + 1)".
  std::string describe() const;

  bool operator==(const QuotientRing& other) const { return modulus_ == other.modulus_; }

 private:
  QuotientRing(std::vector<Rational> modulus, std::string variable)
      : modulus_(std::move(modulus)), variable_(std::move(variable)) {}

  std::vector<Rational> modulus_;
  std::string variable_;
};

using RingPtr = std::shared_ptr<const QuotientRing>;

/// Exact scalar: a rational, or a residue in a configured quotient ring.
///
/// A scalar without a ring is a rational constant and embeds into every
/// quotient ring. Combining residues of two different rings throws
/// RingMismatch.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : Scalar(Rational(value)) {}  // NOLINT(implicit)
  Scalar(int value) : Scalar(Rational(value)) {}   // NOLINT(implicit)
  Scalar(const Rational& value);                   // NOLINT(implicit)
  Scalar(RingPtr ring, std::vector<Rational> residue);

  /// The class of t in `ring`.
  static Scalar generator(RingPtr ring);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Rational>& residue() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_rational() const { return coeffs_.size() <= 1; }
  /// Throws DomainError when the value is not a rational constant.
  Rational to_rational() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }

  /// Multiplicative inverse; throws DomainError for zero divisors.
  Scalar inverse() const;
  Scalar pow(unsigned long exponent) const;

  /// Exact equality; throws RingMismatch for residues of different rings.
  friend bool operator==(const Scalar& lhs, const Scalar& rhs);
  friend bool operator!=(const Scalar& lhs, const Scalar& rhs) { return !(lhs == rhs); }

  std::string to_string() const;

 private:
  static RingPtr common_ring(const Scalar& a, const Scalar& b);
  void normalize();

  RingPtr ring_;
  std::vector<Rational> coeffs_;
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline std::string to_string(const Scalar& s) { return s.to_string(); }

}  // namespace orbitlab
