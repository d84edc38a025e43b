#include "orbitlab/normal_forms.hpp"

#include <algorithm>

#include "orbitlab/chebdickson.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/poly_algebra.hpp"

namespace orbitlab {

namespace {

Rational binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

void require_degree_at_least_two(const RatPoly& f, const char* op) {
  if (f.degree() < 2) throw DomainError(std::string(op) + " needs degree >= 2, got " + to_string(f));
}

}  // namespace

CenteredForm monic_centered(const RatPoly& f) {
  require_degree_at_least_two(f, "monic_centered");
  const unsigned long n = f.degree();
  Rational t = f.coeff(n - 1) / (f.leading() * static_cast<long>(n));
  LinearMap shift(1, t);
  RatPoly g = conjugate(f, shift);
  auto roots = rational_roots_of(g.leading(), n - 1);
  if (roots.empty()) return {g, shift, false};
  LinearMap scale(roots.back(), 0);
  LinearMap ell = scale.after(shift);
  return {conjugate(f, ell), ell, true};
}

EquivalenceSet equivalences_to(const RatPoly& F, const RatPoly& P) {
  const int k = F.degree();
  if (k < 1 || P.degree() != k) {
    throw DomainError("linear equivalence needs equal positive degrees, got " + std::to_string(k) +
                      " and " + std::to_string(P.degree()));
  }
  const Rational& fk = F.leading();
  const Rational& pk = P.leading();
  EquivalenceSet out;
  // Matching degree k-1 pins b as an affine function of the slope a.
  out.b_slope = F.coeff(k - 1) / (fk * k);
  out.b_offset = -P.coeff(k - 1) / (pk * k);
  const RatPoly b_of_a({out.b_offset, out.b_slope});

  // Each lower coefficient gives a polynomial equation E_j(a) = 0.
  RatPoly common;
  bool constrained = false;
  for (int j = 2; j <= k - 1; ++j) {
    RatPoly e;
    for (int i = k - j; i <= k; ++i) {
      if (sgn(P.coeff(i)) == 0) continue;
      e += pow(b_of_a, i - k + j) * Rational(P.coeff(i) * binomial(i, k - j));
    }
    e = e * fk - RatPoly::monomial(Rational(F.coeff(k - j) * pk), j);
    if (e.is_zero()) continue;
    constrained = true;
    common = gcd(common, e);
  }

  std::vector<Rational> slopes;
  if (!constrained) {
    out.family = true;
    slopes = {Rational(1), Rational(-1)};
  } else if (common.degree() >= 1) {
    for (const Rational& a : rational_roots(common)) {
      if (sgn(a) != 0) slopes.push_back(a);
    }
    std::stable_partition(slopes.begin(), slopes.end(), [](const Rational& a) { return sgn(a) > 0; });
  }
  for (const Rational& a : slopes) {
    Rational b = out.b_slope * a + out.b_offset;
    Rational c = fk / (pk * pow(a, k));
    Rational e = F.coeff(0) - c * P(b);
    LinearPair pair{LinearMap(c, e), LinearMap(a, b)};
    if (compose(pair.outer, compose(P, pair.inner)) == F) out.solutions.push_back(pair);
  }
  return out;
}

RatPoly LinearEquivalence::form_poly() const {
  return form == FormKind::Power ? RatPoly::monomial(1, n) : chebyshev_t(n);
}

std::vector<LinearEquivalence> chebyshev_equivalences(const RatPoly& h) {
  require_degree_at_least_two(h, "linear_equivalence");
  const unsigned long n = h.degree();
  std::vector<LinearEquivalence> out;
  for (const auto& pair : equivalences_to(h, chebyshev_t(n)).solutions) {
    out.push_back({FormKind::Cheb, n, pair.outer, pair.inner});
  }
  return out;
}

std::optional<LinearEquivalence> linear_equivalence(const RatPoly& h) {
  require_degree_at_least_two(h, "linear_equivalence");
  const unsigned long n = h.degree();
  auto power = equivalences_to(h, RatPoly::monomial(1, n));
  if (!power.solutions.empty()) {
    const auto& pair = power.solutions.front();
    return LinearEquivalence{FormKind::Power, n, pair.outer, pair.inner};
  }
  auto cheb = chebyshev_equivalences(h);
  if (!cheb.empty()) return cheb.front();
  return std::nullopt;
}

RatPoly NormalFormReport::target() const {
  switch (kind) {
    case Kind::PowerLike:
      return RatPoly::monomial(alpha, n);
    case Kind::ChebyshevLike:
      return chebyshev_t(n) * Rational(epsilon);
    default:
      throw DomainError("report carries no conjugacy target");
  }
}

const char* to_string(NormalFormReport::Kind kind) {
  switch (kind) {
    case NormalFormReport::Kind::PowerLike:
      return "PowerLike";
    case NormalFormReport::Kind::ChebyshevLike:
      return "ChebyshevLike";
    case NormalFormReport::Kind::General:
      return "General";
    case NormalFormReport::Kind::Exceptional:
      return "Exceptional";
  }
  return "?";
}

NormalFormReport conjugacy_normal_form(const RatPoly& f) {
  require_degree_at_least_two(f, "conjugacy_normal_form");
  const unsigned long n = f.degree();
  NormalFormReport report;
  report.n = n;

  // Power shape f = gamma + c (X - gamma)^n: the centering shift must also
  // be the fixed point.
  const Rational gamma = -f.coeff(n - 1) / (f.leading() * static_cast<long>(n));
  const LinearMap to_origin(1, -gamma);
  RatPoly centered = conjugate(f, to_origin);
  if (centered == RatPoly::monomial(f.leading(), n)) {
    report.kind = NormalFormReport::Kind::PowerLike;
    report.alpha = f.leading();
    report.witness = to_origin;
    return report;
  }

  // Chebyshev shape: the witness aX + b must satisfy a^(n-1) = eps * lc(f)
  // and kill the X^(n-1) coefficient.
  const RatPoly tn = chebyshev_t(n);
  for (int eps : {1, -1}) {
    for (const Rational& a : rational_roots_of(Rational(f.leading() * eps), n - 1)) {
      LinearMap w(a, Rational(a * f.coeff(n - 1) / (f.leading() * static_cast<long>(n))));
      if (conjugate(f, w) != tn * Rational(eps)) continue;
      if (report.kind == NormalFormReport::Kind::ChebyshevLike) {
        report.alternates.push_back(w);
        continue;
      }
      report.kind = NormalFormReport::Kind::ChebyshevLike;
      report.epsilon = eps;
      report.witness = w;
    }
  }
  return report;
}

std::optional<NormalFormReport> iterate_root_form(const RatPoly& f, unsigned long n) {
  require_degree_at_least_two(f, "iterate_root_form");
  if (n < 2) throw DomainError("iterate_root_form needs n >= 2");
  const unsigned long r = f.degree();
  auto eq = linear_equivalence(iterate(f, n));
  if (!eq) return std::nullopt;

  NormalFormReport report;
  report.n = r;
  if (eq->form == FormKind::Power) {
    LinearMap w = eq->l1.inverse();
    RatPoly g = conjugate(f, w);
    if (g != RatPoly::monomial(g.leading(), r)) {
      throw Error("internal: power iterate did not lift to " + to_string(f));
    }
    report.kind = NormalFormReport::Kind::PowerLike;
    report.alpha = g.leading();
    report.witness = w;
    return report;
  }
  if (r == 2 && n == 2) {
    report.kind = NormalFormReport::Kind::Exceptional;
    return report;
  }
  const RatPoly tr = chebyshev_t(r);
  for (const auto& cand : chebyshev_equivalences(iterate(f, n))) {
    for (const LinearMap& ell : {cand.l1, cand.l1.after(LinearMap(-1, 0))}) {
      LinearMap w = ell.inverse();
      RatPoly g = conjugate(f, w);
      int eps = g == tr ? 1 : (g == -tr ? -1 : 0);
      if (eps == 0) continue;
      if (report.kind == NormalFormReport::Kind::ChebyshevLike) {
        if (w != report.witness) report.alternates.push_back(w);
        continue;
      }
      report.kind = NormalFormReport::Kind::ChebyshevLike;
      report.epsilon = eps;
      report.witness = w;
    }
  }
  if (report.kind != NormalFormReport::Kind::ChebyshevLike) {
    throw Error("internal: Chebyshev iterate did not lift to " + to_string(f));
  }
  return report;
}

}  // namespace orbitlab
