#include "doctest.h"
#include "support.hpp"

#include "orbitlab/errors.hpp"
#include "orbitlab/laurent.hpp"
#include "orbitlab/poly_algebra.hpp"
#include "orbitlab/scalar.hpp"

using namespace orbitlab;
using testing_support::P;
using testing_support::PolyGen;
using testing_support::Q;

TEST_CASE("ring operations") {
  CHECK(P("X+1") * P("X-1") == P("X^2-1"));
  CHECK(P("X^2-2") + P("2") == P("X^2"));
  CHECK(P("1/2*X") * P("2X") == P("X^2"));
  CHECK((P("X^3") - P("X^3")).is_zero());
  CHECK(P("X^3+X").degree() == 3);
  CHECK(RatPoly().degree() == -1);
}

TEST_CASE("composition and iteration") {
  CHECK(compose(P("X^2"), P("X+1")) == P("X^2+2X+1"));
  CHECK(compose(P("X^2-2"), P("X^2-2")) == P("X^4-4X^2+2"));
  RatPoly p = P("3X^5 - 1/7 X^2 + 4");
  CHECK(compose(p, RatPoly::x()) == p);
  CHECK(iterate(P("X^2"), 3) == P("X^8"));
  CHECK(iterate(P("X^2-2"), 2) == P("X^4-4X^2+2"));
  CHECK(iterate(p, 0) == RatPoly::x());
}

TEST_CASE("linear maps and conjugation") {
  LinearMap l(2, 4);
  CHECK(l.inverse() == LinearMap(Q("1/2"), -2));
  CHECK(LinearMap().inverse() == LinearMap());
  CHECK(LinearMap(-1, 0).inverse() == LinearMap(-1, 0));
  CHECK(compose(l, l.inverse().as_poly()) == RatPoly::x());
  CHECK(l.after(l.inverse()) == LinearMap::identity());
  CHECK_THROWS_AS(LinearMap(0, 1), DomainError);

  CHECK(conjugate(P("2X^2"), LinearMap(2, 0)) == P("X^2"));
  CHECK(conjugate(P("X^3+X+1"), LinearMap()) == P("X^3+X+1"));
  // f(X-1)+1 for f = X^2-2.
  CHECK(conjugate(P("X^2-2"), LinearMap(1, 1)) == P("X^2-2X"));
}

TEST_CASE("laurent composition") {
  RatLaurent phi(RatLaurent::Terms{{1, 1}, {-1, 1}});
  CHECK(laurent_compose(P("X^2"), phi) == RatLaurent(RatLaurent::Terms{{2, 1}, {0, 2}, {-2, 1}}));
  CHECK(laurent_compose(P("X^2-2"), phi) == RatLaurent(RatLaurent::Terms{{2, 1}, {-2, 1}}));
  CHECK(laurent_compose(P("7/3"), phi) == RatLaurent::constant(Q("7/3")));
  CHECK(to_string(laurent_compose(P("X^2"), phi)) == "X^2 + 2 + X^-2");
}

TEST_CASE("composition properties on random inputs") {
  PolyGen gen(1234);
  RatLaurent phi(RatLaurent::Terms{{2, Q("1/2")}, {-1, 3}, {0, -1}});
  for (int trial = 0; trial < 40; ++trial) {
    RatPoly a = gen.poly(static_cast<int>(gen.integer(1, 4)));
    RatPoly b = gen.poly(static_cast<int>(gen.integer(1, 4)));
    RatPoly c = gen.poly(static_cast<int>(gen.integer(0, 4)));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(compose(a, b).degree() == a.degree() * b.degree());
    CHECK(laurent_compose(compose(a, b), phi) == laurent_compose(a, laurent_compose(b, phi)));

    RatPoly f = gen.poly(2, 3, 2);
    for (unsigned m = 0; m <= 2; ++m) {
      for (unsigned n = 0; n <= 2; ++n) CHECK(iterate(f, m + n) == compose(iterate(f, m), iterate(f, n)));
    }
    LinearMap l(gen.nonzero_rational(), gen.rational());
    for (unsigned n = 1; n <= 4; ++n) CHECK(conjugate(iterate(f, n), l) == iterate(conjugate(f, l), n));
  }
}

TEST_CASE("printing") {
  CHECK(to_string(P("X^3-3X")) == "X^3 - 3*X");
  CHECK(to_string(P("1/2*X^3 + X")) == "1/2*X^3 + X");
  CHECK(to_string(P("-X^2")) == "-X^2");
  CHECK(to_string(RatPoly()) == "0");
  CHECK(to_string(P("-1/3")) == "-1/3");
  CHECK(to_string(P("2X-1")) == "2*X - 1");
}

TEST_CASE("quotient-ring scalars") {
  RingPtr r6 = QuotientRing::negacyclic(6);
  Scalar t = Scalar::generator(r6);
  CHECK(t.pow(6) == Scalar(-1));
  CHECK(t.pow(12) == Scalar(1));
  CHECK(t * t.inverse() == Scalar(1));
  CHECK(r6->describe() == "Q[t]/(t^6 + 1)");

  RingPtr r3 = QuotientRing::square_root_of(3);
  Scalar s = Scalar::generator(r3);
  CHECK(s * s == Scalar(3));
  CHECK(s.inverse() == s * Scalar(Q("1/3")));
  CHECK_THROWS_AS((void)(s + t), RingMismatch);
  CHECK_THROWS_AS((void)(s == t), RingMismatch);

  // Rationals embed into either ring.
  CHECK(s + Scalar(1) - Scalar(1) == s);

  // Zero divisors exist when the modulus is reducible.
  RingPtr split = QuotientRing::make({Rational(-1), Rational(0), Rational(1)});
  Scalar u = Scalar::generator(split);
  CHECK(((u - Scalar(1)) * (u + Scalar(1))).is_zero());
  CHECK_THROWS_AS((void)(u - Scalar(1)).inverse(), DomainError);

  // Scalar polynomials reuse the same template.
  ScalarPoly p({Scalar(0), t});
  CHECK(pow(p, 6) == ScalarPoly::monomial(Scalar(-1), 6));
  CHECK(to_string(p) == "(t)*X");
}

TEST_CASE("polynomial algebra helpers") {
  auto [q, r] = divmod(P("X^3 - 1"), P("X - 1"));
  CHECK(q == P("X^2 + X + 1"));
  CHECK(r.is_zero());
  CHECK(gcd(P("X^2-1"), P("2X+2")) == P("X+1"));

  auto sq = squarefree_decomposition(P("3(X-1)^2 (X+2)^3 (X^2+1)"));
  REQUIRE(sq.size() == 3);
  CHECK(sq[0] == std::make_pair(P("X^2+1"), 1UL));
  CHECK(sq[1] == std::make_pair(P("X-1"), 2UL));
  CHECK(sq[2] == std::make_pair(P("X+2"), 3UL));

  CHECK(rational_roots(P("(2X-1)(3X+4)^2 X (X^2+2)")) == std::vector<Rational>{Q("-4/3"), 0, Q("1/2")});
  CHECK(rational_roots(P("X^2+1")).empty());
  CHECK(root_multiplicity(P("(X-2)^3 (X+1)"), 2) == 3);
}
