#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/factor.hpp"
#include "orbitlab/polynomial.hpp"

namespace orbitlab {

/// Caps for orbit enumeration: number of steps and bit length of iterates.
struct OrbitBudget {
  unsigned long max_steps = 64;
  std::size_t max_bits = std::size_t{1} << 16;
};

/// Forward orbit x0, f(x0), ...; when a cycle is found the repeated value is
/// the last point, so points[tail + cycle] == points[tail].
struct OrbitTrace {
  enum class Status { Wandering, Preperiodic };

  Rational start;
  std::vector<Rational> points;
  Status status = Status::Wandering;
  unsigned long steps = 0;         ///< applications of f performed
  unsigned long tail_length = 0;   ///< Preperiodic only
  unsigned long cycle_length = 0;  ///< Preperiodic only
  bool height_capped = false;      ///< Wandering because an iterate hit max_bits
};

OrbitTrace orbit(const RatPoly& f, const Rational& x0, const OrbitBudget& budget = {});

/// Multiplicative relations among nonzero rationals.
///
/// Generators equal to +-1 contribute only `sign_relations` (e_i for 1, 2e_i
/// for -1). Every relation is an integer combination of relation_basis and
/// sign_relations; relation_basis is in echelon form and its entries at the
/// +-1 positions are 0 or 1.
struct ExponentLattice {
  std::vector<Rational> generators;
  std::vector<std::vector<Integer>> relation_basis;
  std::vector<std::vector<Integer>> sign_relations;
};

/// Throws FactorizationFailure naming the offending generator, DomainError on 0.
ExponentLattice multiplicative_lattice(const std::vector<Rational>& xs,
                                       unsigned long factor_bound = default_factor_bound());

enum class Completeness { Proven, BoundedSearchOnly };
const char* to_string(Completeness c);

struct OrbitHit {
  Rational value;
  unsigned long m = 0;
  unsigned long n = 0;
};

/// f^(m0 + k dm)(x0) = g^(n0 + k dn)(y0) for every k >= 0, with the iterate
/// identity f^(dm) = g^(dn) verified.
struct InfiniteFamily {
  unsigned long m0 = 0;
  unsigned long n0 = 0;
  unsigned long dm = 0;
  unsigned long dn = 0;
  RatPoly common_iterate;
};

struct IntersectionReport {
  /// Hits outside the family. For a finite orbit (degenerate input) each
  /// common value is listed once with its least indices.
  std::vector<OrbitHit> finite_points;
  std::optional<InfiniteFamily> infinite_family;
  Completeness completeness = Completeness::BoundedSearchOnly;
  bool degenerate = false;  ///< one of the orbits is finite
  std::string note;
};

/// Exact solver for f = alpha X^r, g = beta X^s (r, s >= 2).
IntersectionReport power_map_intersection_exact(const Rational& alpha, unsigned long r,
                                                const Rational& beta, unsigned long s,
                                                const Rational& x0, const Rational& y0,
                                                unsigned long search_bound = 64);

/// Bounded search; delegates to the exact solver when f and g are power maps
/// about a common center.
IntersectionReport orbit_intersection(const RatPoly& f, const RatPoly& g, const Rational& x0,
                                      const Rational& y0, const OrbitBudget& budget = {});

struct CommonIterateResult {
  enum class Verdict { Never, Found, Unknown };

  Verdict verdict = Verdict::Unknown;
  unsigned long m1 = 0;
  unsigned long m2 = 0;
  RatPoly iterate;  ///< Found: f^(m1) == g^(m2)
  std::string reason;
};

const char* to_string(CommonIterateResult::Verdict v);

/// Largest iterate degree that is expanded for an exact comparison.
inline constexpr unsigned long kMaxExpandedDegree = 4096;

CommonIterateResult common_iterate(const RatPoly& f, const RatPoly& g, unsigned long K = 8);

struct CommensurabilityWitness {
  unsigned long n = 0;
  RatPoly h;  ///< g^(n) == f^(m) o h
};

std::optional<CommensurabilityWitness> commensurability_witness(const RatPoly& f, const RatPoly& g,
                                                                unsigned long m, unsigned long N);

/// f_i(X) = -beta + eps_i g^(n_i)(X + beta), g in X^r Q[X^s].
struct RittCertificate {
  Scalar beta;
  RatPoly g;
  unsigned long r = 0;
  unsigned long s = 1;
  Scalar eps1 = 1;
  Scalar eps2 = 1;
  unsigned long n1 = 1;
  unsigned long n2 = 1;
};

bool verify_ritt_certificate(const RatPoly& f1, const RatPoly& f2, const RittCertificate& cert,
                             unsigned long m1, unsigned long m2);

}  // namespace orbitlab
