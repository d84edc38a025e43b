#include "doctest.h"
#include "support.hpp"

#include "orbitlab/chebdickson.hpp"
#include "orbitlab/normal_forms.hpp"

using namespace orbitlab;
using testing_support::P;
using testing_support::PolyGen;
using testing_support::Q;

namespace {

using Kind = NormalFormReport::Kind;

void check_report_sound(const RatPoly& f, const NormalFormReport& r) {
  if (r.kind != Kind::PowerLike && r.kind != Kind::ChebyshevLike) return;
  CHECK(conjugate(f, r.witness) == r.target());
  for (const auto& w : r.alternates) {
    RatPoly g = conjugate(f, w);
    CHECK((g == r.target() || g == -r.target()));
  }
}

void check_equivalence_sound(const RatPoly& h, const LinearEquivalence& eq) {
  CHECK(compose(eq.l1, compose(eq.form_poly(), eq.l2.as_poly())) == h);
}

}  // namespace

TEST_CASE("monic centering") {
  auto a = monic_centered(P("2X^2+4X+1"));
  CHECK(a.monic);
  CHECK(a.g == P("X^2"));
  CHECK(a.ell == LinearMap(2, 2));

  auto b = monic_centered(P("X^2-2"));
  CHECK(b.g == P("X^2-2"));
  CHECK(b.ell == LinearMap());

  auto c = monic_centered(P("X^3+3X^2"));
  CHECK(c.ell == LinearMap(1, 1));
  CHECK(c.g == P("X^3-3X+3"));
  CHECK(c.g == conjugate(P("X^3+3X^2"), c.ell));

  auto d = monic_centered(P("2X^3 + X"));
  CHECK_FALSE(d.monic);
  CHECK(d.g == P("2X^3 + X"));
}

TEST_CASE("linear equivalence examples") {
  auto p = linear_equivalence(P("3(X-1)^4+7"));
  REQUIRE(p);
  CHECK(p->form == FormKind::Power);
  CHECK(p->l2 == LinearMap(1, -1));
  CHECK(p->l1 == LinearMap(3, 7));

  RatPoly h = compose(P("X-5"), compose(chebyshev_t(3), P("2X+1")));
  auto c = linear_equivalence(h);
  REQUIRE(c);
  CHECK(c->form == FormKind::Cheb);
  check_equivalence_sound(h, *c);
  auto all = chebyshev_equivalences(h);
  REQUIRE(all.size() == 2);
  bool plus = false, minus = false;
  for (const auto& eq : all) {
    check_equivalence_sound(h, eq);
    plus = plus || (eq.l1 == LinearMap(1, -5) && eq.l2 == LinearMap(2, 1));
    minus = minus || (eq.l1 == LinearMap(-1, -5) && eq.l2 == LinearMap(-2, -1));
  }
  CHECK(plus);
  CHECK(minus);

  CHECK_FALSE(linear_equivalence(P("X^3+X+1")).has_value());
  // Degree two: the power form wins.
  CHECK(linear_equivalence(P("X^2-2"))->form == FormKind::Power);
}

TEST_CASE("conjugacy normal form examples") {
  auto a = conjugacy_normal_form(P("2X^2+4X+1"));
  CHECK(a.kind == Kind::PowerLike);
  CHECK(a.alpha == 2);
  CHECK(a.witness == LinearMap(1, 1));
  check_report_sound(P("2X^2+4X+1"), a);

  auto b = conjugacy_normal_form(P("X^2-2X"));
  CHECK(b.kind == Kind::ChebyshevLike);
  CHECK(b.epsilon == 1);
  CHECK(b.witness == LinearMap(1, -1));
  check_report_sound(P("X^2-2X"), b);

  CHECK(conjugacy_normal_form(P("X^3+X+1")).kind == Kind::General);

  auto t3 = conjugacy_normal_form(chebyshev_t(3));
  CHECK(t3.kind == Kind::ChebyshevLike);
  CHECK(t3.alternates.size() == 1);  // X and -X both conjugate T_3 to +-T_3
  check_report_sound(chebyshev_t(3), t3);
  // -T_4 is conjugate to T_4 by -X; -T_3 is not conjugate to T_3.
  CHECK(conjugacy_normal_form(-chebyshev_t(4)).epsilon == 1);
  CHECK(conjugacy_normal_form(-chebyshev_t(3)).epsilon == -1);
  CHECK(conjugacy_normal_form(-chebyshev_t(3)).alternates.size() == 1);
}

TEST_CASE("iterate root forms") {
  auto a = iterate_root_form(P("2X^2+4X+1"), 2);
  REQUIRE(a);
  CHECK(a->kind == Kind::PowerLike);
  check_report_sound(P("2X^2+4X+1"), *a);

  auto b = iterate_root_form(chebyshev_t(3), 2);
  REQUIRE(b);
  CHECK(b->kind == Kind::ChebyshevLike);
  check_report_sound(chebyshev_t(3), *b);

  // T_2 o (-2 + alpha^2 (X + 2)) with alpha = 2: its second iterate is
  // equivalent to T_4, yet no conclusion about f follows.
  RatPoly f = compose(chebyshev_t(2), P("4X+6"));
  REQUIRE(linear_equivalence(iterate(f, 2)));
  CHECK(linear_equivalence(iterate(f, 2))->form == FormKind::Cheb);
  auto c = iterate_root_form(f, 2);
  REQUIRE(c);
  CHECK(c->kind == Kind::Exceptional);
  CHECK(conjugacy_normal_form(f).kind != Kind::ChebyshevLike);
  // With a third iterate the lemma applies again.
  auto d = iterate_root_form(compose(P("3X-1"), compose(chebyshev_t(2), P("X/3+1/3"))), 3);
  REQUIRE(d);
  CHECK(d->kind == Kind::ChebyshevLike);

  CHECK_FALSE(iterate_root_form(P("X^3+X+1"), 2).has_value());
}

TEST_CASE("power solutions fix the origin") {
  for (unsigned long n : {3UL, 4UL, 5UL}) {
    RatPoly xn = RatPoly::monomial(1, n);
    auto set = equivalences_to(xn, xn);
    CHECK(set.family);
    CHECK(set.b_slope == 0);
    CHECK(set.b_offset == 0);
    for (const Rational& beta : {Rational(2), Q("-1/3"), Rational(5)}) {
      LinearMap b(beta, 0);
      LinearMap a(Rational(1 / pow(beta, n)), 0);
      CHECK(compose(a, compose(xn, b.as_poly())) == xn);
      // Shifting the inner map breaks every solution.
      RatPoly shifted = compose(xn, LinearMap(beta, 1).as_poly());
      auto s = equivalences_to(shifted, xn);
      for (const auto& pair : s.solutions) CHECK(sgn(pair.inner.b()) != 0);
    }
  }
}

TEST_CASE("Chebyshev polynomials are not power-equivalent") {
  for (unsigned long n = 3; n <= 8; ++n) {
    CHECK(equivalences_to(chebyshev_t(n), RatPoly::monomial(1, n)).solutions.empty());
  }
}

TEST_CASE("Chebyshev self-equivalences are sign pairs") {
  for (unsigned long n : {3UL, 4UL, 5UL}) {
    auto set = equivalences_to(chebyshev_t(n), chebyshev_t(n));
    CHECK_FALSE(set.family);
    REQUIRE(set.solutions.size() == 2);
    for (const auto& pair : set.solutions) {
      const Rational eps = pair.inner.a();
      CHECK((eps == 1 || eps == -1));
      CHECK(pair.inner.b() == 0);
      CHECK(pair.outer == LinearMap(pow(eps, n), 0));
    }
  }
}

TEST_CASE("middle linear factors between powers and Chebyshev polynomials") {
  const std::vector<LinearMap> middles = {LinearMap(1, 0), LinearMap(-1, 0), LinearMap(2, 0),
                                          LinearMap(Q("1/3"), 0), LinearMap(1, 1),
                                          LinearMap(-2, Q("1/2")), LinearMap(3, -4)};
  for (unsigned long r : {2UL, 3UL}) {
    for (unsigned long s : {2UL, 3UL}) {
      for (const auto& ell : middles) {
        RatPoly h = compose(RatPoly::monomial(1, r), compose(ell.as_poly(), RatPoly::monomial(1, s)));
        bool power = !equivalences_to(h, RatPoly::monomial(1, r * s)).solutions.empty();
        CHECK(power == (sgn(ell.b()) == 0));
      }
    }
  }
  for (unsigned long r : {3UL, 4UL}) {
    for (unsigned long s : {3UL, 4UL}) {
      for (const auto& ell : middles) {
        RatPoly h = compose(chebyshev_t(r), compose(ell.as_poly(), chebyshev_t(s)));
        bool cheb = !equivalences_to(h, chebyshev_t(r * s)).solutions.empty();
        CHECK(cheb == (sgn(ell.b()) == 0 && (ell.a() == 1 || ell.a() == -1)));
      }
    }
  }
}

TEST_CASE("power normal form round trip") {
  PolyGen gen(5);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned long r = gen.integer(2, 5);
    Rational alpha = gen.nonzero_rational();
    LinearMap ell(gen.nonzero_rational(), gen.rational());
    RatPoly f = conjugate(RatPoly::monomial(alpha, r), ell.inverse());
    auto report = conjugacy_normal_form(f);
    REQUIRE(report.kind == Kind::PowerLike);
    check_report_sound(f, report);
    CHECK_FALSE(rational_roots_of(Rational(report.alpha / alpha), r - 1).empty());
  }
}
