#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "orbitlab/errors.hpp"
#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// h = outer o inner.
struct DecompPair {
  RatPoly outer;
  RatPoly inner;

  friend bool operator==(const DecompPair&, const DecompPair&) = default;
};

/// Indecomposable factors of degree >= 2; factors[0] o factors[1] o ... is the target.
struct DecompChain {
  std::vector<RatPoly> factors;

  RatPoly composed() const;
  friend bool operator==(const DecompChain&, const DecompChain&) = default;
};

/// Raised by complete_decompositions when more chains exist than the cap allows.
class DecompositionCapExceeded : public CapExceeded {
 public:
  DecompositionCapExceeded(const std::string& what, std::vector<DecompChain> partial)
      : CapExceeded(what), partial_(std::move(partial)) {}
  const std::vector<DecompChain>& partial() const noexcept { return partial_; }

 private:
  std::vector<DecompChain> partial_;
};

/// The unique a with a o b = h, if any. Throws DomainError when b is constant.
std::optional<RatPoly> right_divide(const RatPoly& h, const RatPoly& b);

/// Every b with a o b = h (rational coefficients only). Throws DomainError
/// if deg a is zero or does not divide deg h.
std::vector<RatPoly> left_divide(const RatPoly& h, const RatPoly& a);

/// Split h = a o b with deg b = m and b monic, b(0) = 0. Throws DomainError
/// unless m divides deg h; splits with m = 1 or m = deg h are allowed and trivial.
std::optional<DecompPair> decompose_at(const RatPoly& h, unsigned long m);

/// All normalized splits over proper divisors of deg h, by increasing inner degree.
std::vector<DecompPair> bidecompositions(const RatPoly& h);

bool is_indecomposable(const RatPoly& h);

/// All maximal chains of indecomposables (inner factors normalized).
std::vector<DecompChain> complete_decompositions(const RatPoly& h, std::size_t cap = 64);

/// g with iterate(g, n) == h over the rationals, if one exists. Throws
/// DomainError unless deg h = d^n for an integer d >= 2.
std::optional<RatPoly> compositional_root(const RatPoly& h, unsigned long n);

}  // namespace orbitlab
