#include "orbitlab/siegel.hpp"

#include <numeric>
#include <vector>

#include "orbitlab/chebdickson.hpp"
#include "orbitlab/decomp.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/normal_forms.hpp"
#include "orbitlab/poly_algebra.hpp"

namespace orbitlab {

namespace {

RatPoly kind5_left() { return pow(RatPoly({Rational(-1), Rational(0), Rational(1)}), 3); }
RatPoly kind5_right() { return RatPoly({Rational(0), Rational(0), Rational(0), Rational(-4), Rational(3)}); }

Rational pow_signed(const Rational& q, long e) {
  return e >= 0 ? pow(q, static_cast<unsigned long>(e)) : pow(Rational(1 / q), static_cast<unsigned long>(-e));
}

// u, w with u*a + w*b = gcd(a, b).
std::pair<long, long> bezout(long a, long b) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  return {old_s, old_t};
}

// Every nu with H == P o nu.
std::vector<LinearMap> right_linear_matches(const RatPoly& H, const RatPoly& P) {
  std::vector<LinearMap> out;
  const int k = P.degree();
  if (k < 1 || H.degree() != k) return out;
  auto slopes = rational_roots_of(Rational(H.leading() / P.leading()), k);
  // Prefer the positive slope so untwisted inputs come back untwisted.
  for (auto it = slopes.rbegin(); it != slopes.rend(); ++it) {
    const Rational& a = *it;
    if (sgn(a) == 0) continue;
    Rational ak1 = pow(a, k - 1);
    Rational b = (H.coeff(k - 1) / ak1 - P.coeff(k - 1)) / (P.leading() * k);
    LinearMap nu(a, b);
    if (compose(P, nu) == H) out.push_back(nu);
  }
  return out;
}

struct Match {
  LinearMap lambda;  // common left twist: F' = lambda o F1 o mu
  LinearMap mu;
  LinearMap nu;
  RatPoly F1;
  RatPoly G1;
  StandardPairParams params;
};

// F' = lambda o P1 o mu and G' = lambda o P2 o nu for fixed templates.
std::optional<Match> match_templates(const RatPoly& Fp, const RatPoly& Gp, const RatPoly& P1,
                                     const RatPoly& P2, const StandardPairParams& params) {
  if (Fp.degree() != P1.degree() || Gp.degree() != P2.degree()) return std::nullopt;
  auto finish = [&](const LinearMap& lambda) -> std::optional<Match> {
    RatPoly f = compose(lambda.inverse(), Fp);
    RatPoly g = compose(lambda.inverse(), Gp);
    auto mus = right_linear_matches(f, P1);
    auto nus = right_linear_matches(g, P2);
    if (mus.empty() || nus.empty()) return std::nullopt;
    return Match{lambda, mus.front(), nus.front(), P1, P2, params};
  };

  // Pick the common left twist from a side where it is rigid.
  if (P1.degree() >= 3 || P2.degree() >= 3) {
    const bool left_rigid = P1.degree() >= 3;
    auto set = left_rigid ? equivalences_to(Fp, P1) : equivalences_to(Gp, P2);
    if (set.family) return std::nullopt;
    for (const auto& pair : set.solutions) {
      if (auto m = finish(pair.outer)) return m;
    }
    return std::nullopt;
  }
  if (P1.degree() == 1 || P2.degree() == 1) {
    auto set = P1.degree() == 1 ? equivalences_to(Gp, P2) : equivalences_to(Fp, P1);
    for (const auto& pair : set.solutions) {
      if (auto m = finish(pair.outer)) return m;
    }
    return std::nullopt;
  }
  // Two quadratics without linear terms: the critical values fix the twist.
  if (sgn(P1.coeff(1)) != 0 || sgn(P2.coeff(1)) != 0) return std::nullopt;
  auto critical_value = [](const RatPoly& q) {
    return q(Rational(-q.coeff(1) / (q.coeff(2) * 2)));
  };
  Rational dp = P1.coeff(0) - P2.coeff(0);
  if (sgn(dp) == 0) return std::nullopt;
  Rational c = (critical_value(Fp) - critical_value(Gp)) / dp;
  if (sgn(c) == 0) return std::nullopt;
  Rational e = critical_value(Fp) - c * P1.coeff(0);
  return finish(LinearMap(c, e));
}

// Left twist and inner map putting F' in the form lambda o X^m o mu.
std::optional<std::pair<LinearMap, LinearMap>> power_twist(const RatPoly& Fp) {
  const unsigned long m = Fp.degree();
  Rational b = Fp.coeff(m - 1) / (Fp.leading() * static_cast<long>(m));
  Rational e = Fp.coeff(0) - Fp.leading() * pow(b, m);
  LinearMap lambda(Fp.leading(), e), mu(1, b);
  if (compose(lambda, compose(RatPoly::monomial(1, m), mu.as_poly())) != Fp) return std::nullopt;
  return std::make_pair(lambda, mu);
}

// (X^m, X^r p^m) with gcd(r, m) = 1.
std::optional<Match> match_kind1(const RatPoly& Fp, const RatPoly& Gp) {
  const unsigned long m = Fp.degree();
  if (m < 1 || Gp.degree() < 1) return std::nullopt;
  if (m == 1) {
    LinearMap lambda = LinearMap::from_poly(Fp);
    RatPoly h = compose(lambda.inverse(), Gp);
    StandardPairParams params{1, 1, 0, 0, h};
    return Match{lambda, LinearMap(), LinearMap(), RatPoly::x(), h, params};
  }
  auto twist = power_twist(Fp);
  if (!twist) return std::nullopt;
  const auto& [lambda, mu] = *twist;
  RatPoly h = compose(lambda.inverse(), Gp);

  // h = kappa (X - delta)^j Q^m with a single root off the m-divisible pattern.
  std::optional<Rational> delta;
  unsigned long j = 0;
  RatPoly q = RatPoly::constant(1);
  for (const auto& [factor, mult] : squarefree_decomposition(h)) {
    if (mult % m == 0) {
      q *= pow(factor, mult / m);
      continue;
    }
    if (delta || factor.degree() != 1 || std::gcd(mult, m) != 1) return std::nullopt;
    delta = -factor.coeff(0);
    j = mult;
  }
  if (!delta) return std::nullopt;
  const Rational kappa = h.leading();
  auto [u, w] = bezout(static_cast<long>(j), static_cast<long>(m));
  Rational beta = pow_signed(kappa, u);
  Rational gamma = pow_signed(kappa, w);
  LinearMap nu(beta, Rational(-beta * *delta));
  RatPoly p = compose(q, nu.inverse()) * gamma;
  RatPoly g1 = RatPoly::monomial(1, j) * pow(p, m);
  if (compose(g1, nu) != h) return std::nullopt;
  StandardPairParams params{1, m, 0, j, p};
  return Match{lambda, mu, nu, RatPoly::monomial(1, m), g1, params};
}

// (X^2, (X^2+1) p^2).
std::optional<Match> match_kind2(const RatPoly& Fp, const RatPoly& Gp) {
  if (Fp.degree() != 2 || Gp.degree() < 2 || Gp.degree() % 2 != 0) return std::nullopt;
  auto twist = power_twist(Fp);
  if (!twist) return std::nullopt;
  const auto& [lambda, mu] = *twist;
  RatPoly h = compose(lambda.inverse(), Gp);

  RatPoly odd = RatPoly::constant(1), half = RatPoly::constant(1);
  for (const auto& [factor, mult] : squarefree_decomposition(h)) {
    if (mult % 2 == 1) odd *= factor;
    half *= pow(factor, mult / 2);
  }
  if (odd.degree() != 2) return std::nullopt;
  // odd = (X + o1/2)^2 + D; need D and lc(h) * D to be rational squares.
  const Rational o1 = odd.coeff(1);
  const Rational D = odd.coeff(0) - o1 * o1 / 4;
  auto sqrt_d = rational_roots_of(D, 2);
  auto sqrt_g = rational_roots_of(Rational(h.leading() * D), 2);
  if (sgn(D) <= 0 || sqrt_d.empty() || sqrt_g.empty()) return std::nullopt;
  const Rational beta = 1 / sqrt_d.back();
  LinearMap nu(beta, Rational(beta * o1 / 2));
  RatPoly p = compose(half, nu.inverse()) * sqrt_g.back();
  RatPoly g1 = RatPoly({Rational(1), Rational(0), Rational(1)}) * pow(p, 2);
  if (compose(g1, nu) != h) return std::nullopt;
  StandardPairParams params{2, 2, 0, 0, p};
  return Match{lambda, mu, nu, RatPoly::monomial(1, 2), g1, params};
}

std::optional<Match> match_residual(const RatPoly& Fp, const RatPoly& Gp) {
  const unsigned long m = Fp.degree(), n = Gp.degree();
  if (m < 1 || n < 1) return std::nullopt;
  if (std::gcd(m, n) == 1) {
    StandardPairParams params{3, m, n, 0, RatPoly::constant(1)};
    if (auto hit = match_templates(Fp, Gp, chebyshev_t(m), chebyshev_t(n), params)) return hit;
  } else {
    StandardPairParams params{4, m, n, 0, RatPoly::constant(1)};
    if (auto hit = match_templates(Fp, Gp, chebyshev_t(m), -chebyshev_t(n), params)) return hit;
  }
  if (m == 6 && n == 4) {
    StandardPairParams params{5, 6, 4, 0, RatPoly::constant(1)};
    if (auto hit = match_templates(Fp, Gp, kind5_left(), kind5_right(), params)) return hit;
  }
  if (auto hit = match_kind1(Fp, Gp)) return hit;
  return match_kind2(Fp, Gp);
}

}  // namespace

void validate(const StandardPairParams& params) {
  auto fail = [&](const std::string& why) {
    throw DomainError("invalid kind-" + std::to_string(params.kind) + " parameters: " + why);
  };
  switch (params.kind) {
    case 1:
      if (params.m < 1) fail("m must be positive");
      if (params.p.is_zero()) fail("p must be nonzero");
      if (std::gcd(params.r, params.m) != 1) fail("r must be coprime to m");
      break;
    case 2:
      if (params.p.is_zero()) fail("p must be nonzero");
      break;
    case 3:
      if (params.m < 1 || params.n < 1) fail("m and n must be positive");
      if (std::gcd(params.m, params.n) != 1) fail("gcd(m, n) must be 1");
      break;
    case 4:
      if (params.m < 1 || params.n < 1) fail("m and n must be positive");
      if (std::gcd(params.m, params.n) <= 1) fail("gcd(m, n) must exceed 1");
      break;
    case 5:
      break;
    default:
      fail("kind must be between 1 and 5");
  }
}

std::pair<RatPoly, RatPoly> standard_pair(const StandardPairParams& params) {
  validate(params);
  switch (params.kind) {
    case 1:
      return {RatPoly::monomial(1, params.m), RatPoly::monomial(1, params.r) * pow(params.p, params.m)};
    case 2:
      return {RatPoly::monomial(1, 2), RatPoly({Rational(1), Rational(0), Rational(1)}) * pow(params.p, 2)};
    case 3:
      return {chebyshev_t(params.m), chebyshev_t(params.n)};
    case 4:
      return {chebyshev_t(params.m), -chebyshev_t(params.n)};
    default:
      return {kind5_left(), kind5_right()};
  }
}

SiegelWitness chebyshev_sign_witness(unsigned long m, unsigned long n) {
  if (m < 1 || n < 1) throw DomainError("chebyshev_sign_witness needs positive degrees");
  // t plays a root of unity with t^(mn) = -1.
  SiegelWitness w;
  w.ring = QuotientRing::negacyclic(m * n);
  Scalar t = Scalar::generator(w.ring);
  const long ml = static_cast<long>(m), nl = static_cast<long>(n);
  w.phi = ScalarLaurent::monomial(Scalar(1), nl) + ScalarLaurent::monomial(Scalar(1), -nl);
  w.psi = ScalarLaurent::monomial(t.pow(m), ml) + ScalarLaurent::monomial(t.inverse().pow(m), -ml);
  return w;
}

std::string SiegelWitness::ring_description() const { return ring ? ring->describe() : "Q"; }

SiegelWitness siegel_witness(const StandardPairParams& params) {
  validate(params);
  using L = ScalarLaurent;
  auto lift = [](const RatLaurent& x) { return to_scalar_laurent(x); };
  SiegelWitness w;
  switch (params.kind) {
    case 1: {
      // X^m o X^r p(X^m) = X^r p(X)^m o X^m
      RatLaurent xm = RatLaurent::monomial(1, static_cast<long>(params.m));
      w.phi = lift(RatLaurent::monomial(1, static_cast<long>(params.r)) * laurent_compose(params.p, xm));
      w.psi = lift(xm);
      break;
    }
    case 2: {
      // psi = X - (4X)^-1 and phi = (X + (4X)^-1) p(psi)
      RatLaurent psi(RatLaurent::Terms{{1, 1}, {-1, Rational(-1, 4)}});
      RatLaurent plus(RatLaurent::Terms{{1, 1}, {-1, Rational(1, 4)}});
      w.phi = lift(plus * laurent_compose(params.p, psi));
      w.psi = lift(psi);
      break;
    }
    case 3:
      w.phi = lift(RatLaurent(chebyshev_t(params.n)));
      w.psi = lift(RatLaurent(chebyshev_t(params.m)));
      break;
    case 4:
      return chebyshev_sign_witness(params.m, params.n);
    default: {
      // t plays sqrt(3).
      w.ring = QuotientRing::square_root_of(3);
      Scalar t = Scalar::generator(w.ring);
      L inner(L::Terms{{2, Scalar(1)}, {1, Scalar(2)}, {-1, Scalar(1)}, {-2, Scalar(Rational(-1, 4))}});
      w.phi = inner * Scalar(t * Scalar(Rational(1, 3)));
      L base(L::Terms{{1, Scalar(1)}, {0, Scalar(1)}, {-1, Scalar(Rational(-1, 2))}});
      L cube = pow(base, 3);
      cube.add_term(0, Scalar(4));
      w.psi = cube * Scalar(Rational(1, 3));
      break;
    }
  }
  return w;
}

bool verify_composition_identity(const ScalarPoly& F, const ScalarLaurent& phi, const ScalarPoly& G,
                                 const ScalarLaurent& psi) {
  RingPtr ring;
  auto unify = [&ring](const Scalar& s) {
    if (!s.ring()) return;
    if (!ring) {
      ring = s.ring();
    } else if (!(*ring == *s.ring())) {
      throw RingMismatch("identity mixes " + ring->describe() + " and " + s.ring()->describe());
    }
  };
  for (const auto& c : F.coefficients()) unify(c);
  for (const auto& c : G.coefficients()) unify(c);
  for (const auto& [k, c] : phi.terms()) unify(c);
  for (const auto& [k, c] : psi.terms()) unify(c);
  return laurent_compose(F, phi) == laurent_compose(G, psi);
}

bool verify_composition_identity(const RatPoly& F, const RatLaurent& phi, const RatPoly& G,
                                 const RatLaurent& psi) {
  return laurent_compose(F, phi) == laurent_compose(G, psi);
}

bool BTWitness::recomposes(const RatPoly& F, const RatPoly& G) const {
  return compose(E, compose(F1, mu.as_poly())) == F && compose(E, compose(G1, nu.as_poly())) == G;
}

std::optional<BTWitness> classify_pair(const RatPoly& F, const RatPoly& G, const ClassifyCaps& caps) {
  if (F.degree() < 1 || G.degree() < 1) throw DomainError("classify_pair needs nonconstant inputs");
  const unsigned long dF = F.degree(), dG = G.degree();
  const unsigned long g = std::gcd(dF, dG);
  std::size_t examined = 0;

  for (unsigned long e = 1; e <= g; ++e) {
    if (g % e != 0) continue;
    // Candidate left factors A with F = A o F' (F' normalized) and G = A o G'.
    std::vector<std::pair<RatPoly, std::pair<RatPoly, RatPoly>>> candidates;
    if (e == 1) {
      candidates.push_back({RatPoly::x(), {F, G}});
    } else {
      auto split = decompose_at(F, dF / e);
      if (!split) continue;
      for (const auto& gp : left_divide(G, split->outer)) {
        candidates.push_back({split->outer, {split->inner, gp}});
      }
    }
    for (const auto& [A, residual] : candidates) {
      if (++examined > caps.max_candidates) {
        throw CapExceeded("classify_pair examined more than " + std::to_string(caps.max_candidates) +
                          " residual candidates");
      }
      const auto& [Fp, Gp] = residual;
      for (bool swapped : {false, true}) {
        auto hit = swapped ? match_residual(Gp, Fp) : match_residual(Fp, Gp);
        if (!hit) continue;
        BTWitness w;
        w.E = compose(A, hit->lambda.as_poly());
        w.params = hit->params;
        w.swapped = swapped;
        if (swapped) {
          w.F1 = hit->G1;
          w.G1 = hit->F1;
          w.mu = hit->nu;
          w.nu = hit->mu;
        } else {
          w.F1 = hit->F1;
          w.G1 = hit->G1;
          w.mu = hit->mu;
          w.nu = hit->nu;
        }
        if (w.recomposes(F, G)) return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace orbitlab
