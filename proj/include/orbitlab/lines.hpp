#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orbitlab/intersect.hpp"
#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// A line in Q^d written as X_i = sigma_i(X_1) or X_i = z_i.
class LineSpec {
 public:
  struct Constant {
    Rational z;
  };
  struct Linked {
    LinearMap sigma;
  };
  using Coordinate = std::variant<Constant, Linked>;

  /// Throws DomainError unless coordinate 1 is Linked(identity).
  explicit LineSpec(std::vector<Coordinate> coords);

  /// The diagonal X_1 = ... = X_d.
  static LineSpec diagonal(std::size_t d);
  /// The line through two distinct points. Throws DomainError when the points
  /// coincide or the first coordinate does not vary along the line.
  static LineSpec through(const std::vector<Rational>& p, const std::vector<Rational>& q);

  std::size_t dimension() const { return coords_.size(); }
  const std::vector<Coordinate>& coordinates() const { return coords_; }
  const Coordinate& operator[](std::size_t i) const { return coords_[i]; }

  bool contains(const std::vector<Rational>& point) const;

  /// "X; 2*X; =5" style description, one entry per coordinate.
  std::string to_string() const;

 private:
  std::vector<Coordinate> coords_;
};

/// Each entry denotes {offsets + j * period : j >= 0}.
struct CosetFamily {
  struct Entry {
    std::vector<unsigned long> offsets;
    std::vector<unsigned long> period;
  };
  std::vector<Entry> entries;
};

/// Throws DomainError on a length mismatch or when every m_i is zero.
bool line_invariant_check(const std::vector<RatPoly>& fs, const std::vector<unsigned long>& ms,
                          const LineSpec& line);

/// Exponents m with (f_i^(m_i)) mapping the line into itself, from common
/// iterates of sigma_i o f_1 o sigma_i^-1 and f_i; Constant coordinates get 0.
std::optional<std::vector<unsigned long>> find_invariant_exponents(const std::vector<RatPoly>& fs,
                                                                   const LineSpec& line,
                                                                   unsigned long bound = 8);

struct LineBudget {
  unsigned long max_exponent = 12;  ///< per-coordinate iterate depth
  std::size_t max_bits = std::size_t{1} << 16;
};

struct LineIntersection {
  CosetFamily cosets;
  std::vector<std::vector<unsigned long>> extras;  ///< hits outside every coset
  std::optional<std::vector<unsigned long>> invariant_exponents;
  Completeness completeness = Completeness::BoundedSearchOnly;
  bool truncated = false;  ///< some orbit hit the bit budget before max_exponent
};

LineIntersection intersection_cosets(const std::vector<RatPoly>& fs, const std::vector<Rational>& alpha,
                                     const LineSpec& line, const LineBudget& budget = {});

}  // namespace orbitlab
