#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "orbitlab/chebdickson.hpp"
#include "orbitlab/decomp.hpp"
#include "orbitlab/poly_algebra.hpp"

using namespace orbitlab;
using testing_support::P;
using testing_support::PolyGen;

namespace {

// P = c * X^j * q^n for some j >= 1, rational c, monic rational q.
bool has_power_shape_at_zero(const RatPoly& p, unsigned long n) {
  if (p.degree() < 1 || sgn(p.coeff(0)) != 0) return false;
  unsigned long j = root_multiplicity(p, 0);
  RatPoly rest = divmod(p, RatPoly::monomial(1, j)).first;
  if (rest.degree() % n != 0) return false;
  RatPoly monic = rest * Rational(1 / rest.leading());
  return !left_divide(monic, RatPoly::monomial(1, n)).empty();
}

// P = S o l with S of the above shape: translate a rational root to zero.
bool has_power_shape_up_to_linear(const RatPoly& p, unsigned long n) {
  for (const Rational& root : rational_roots(p)) {
    if (has_power_shape_at_zero(compose(p, RatPoly({root, Rational(1)})), n)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("right division") {
  CHECK(right_divide(P("X^4-4X^2+2"), P("X^2-2")) == P("X^2-2"));
  RatPoly h = P("3X^5 - X + 1/2");
  CHECK(right_divide(h, RatPoly::x()) == h);
  CHECK_FALSE(right_divide(P("X^3"), P("X^2")).has_value());
  CHECK_FALSE(right_divide(P("X^4+X"), P("X^2")).has_value());
  CHECK_THROWS_AS(right_divide(h, P("5")), DomainError);
}

TEST_CASE("left division") {
  auto roots = left_divide(chebyshev_t(6), chebyshev_t(2));
  REQUIRE(roots.size() == 2);
  CHECK(((roots[0] == chebyshev_t(3) && roots[1] == -chebyshev_t(3)) ||
         (roots[1] == chebyshev_t(3) && roots[0] == -chebyshev_t(3))));
  auto sq = left_divide(P("X^4"), P("X^2"));
  CHECK(sq.size() == 2);
  CHECK(left_divide(P("X^4+1"), P("X^2")).empty());
  CHECK_THROWS_AS(left_divide(P("X^5"), P("X^2")), DomainError);
  CHECK(left_divide(P("2X^3 + 7"), P("2X + 1")) == std::vector<RatPoly>{P("X^3 + 3")});
}

TEST_CASE("decompose_at examples") {
  auto t4 = decompose_at(P("X^4-4X^2+2"), 2);
  REQUIRE(t4);
  CHECK(t4->inner == P("X^2"));
  CHECK(t4->outer == P("X^2-4X+2"));
  auto x6 = decompose_at(P("X^6"), 3);
  REQUIRE(x6);
  CHECK(*x6 == DecompPair{P("X^2"), P("X^3")});
  CHECK_FALSE(decompose_at(P("X^4+X^3+X+1"), 2).has_value());
}

TEST_CASE("decomposition round trip") {
  PolyGen gen(77);
  for (int trial = 0; trial < 60; ++trial) {
    RatPoly a = gen.poly(static_cast<int>(gen.integer(2, 5)));
    int m = static_cast<int>(gen.integer(2, 5));
    RatPoly b = gen.poly(m);
    b = (b - RatPoly::constant(b.coeff(0))) * Rational(1 / b.leading());
    RatPoly h = compose(a, b);
    auto split = decompose_at(h, m);
    REQUIRE(split);
    CHECK(split->outer == a);
    CHECK(split->inner == b);
    CHECK(right_divide(h, b) == a);
  }
}

TEST_CASE("bidecompositions") {
  auto x8 = bidecompositions(P("X^8"));
  CHECK(x8 == std::vector<DecompPair>{{P("X^4"), P("X^2")}, {P("X^2"), P("X^4")}});
  auto t6 = bidecompositions(chebyshev_t(6));
  REQUIRE(t6.size() == 2);
  CHECK(t6[0].inner.degree() == 2);
  CHECK(t6[1].inner.degree() == 3);
  for (const auto& s : t6) CHECK(compose(s.outer, s.inner) == chebyshev_t(6));
  CHECK(bidecompositions(P("X^3+X+1")).empty());
}

TEST_CASE("complete decompositions") {
  auto x4 = complete_decompositions(P("X^4"));
  CHECK(x4 == std::vector<DecompChain>{DecompChain{{P("X^2"), P("X^2")}}});
  CHECK(complete_decompositions(P("X^3+X+1"), 4) == std::vector<DecompChain>{DecompChain{{P("X^3+X+1")}}});

  // T_12 has the degree orderings (2,2,3), (2,3,2), (3,2,2).
  auto t12 = complete_decompositions(chebyshev_t(12), 16);
  CHECK(t12.size() == 3);
  std::set<std::vector<int>> orders;
  for (const auto& chain : t12) {
    CHECK(chain.composed() == chebyshev_t(12));
    std::vector<int> degs;
    for (const auto& f : chain.factors) {
      degs.push_back(f.degree());
      CHECK(is_indecomposable(f));
    }
    orders.insert(degs);
  }
  CHECK(orders == std::set<std::vector<int>>{{2, 2, 3}, {2, 3, 2}, {3, 2, 2}});

  try {
    complete_decompositions(chebyshev_t(12), 2);
    FAIL("expected the cap to trip");
  } catch (const DecompositionCapExceeded& e) {
    CHECK(e.partial().size() == 2);
  }
}

TEST_CASE("compositional roots") {
  CHECK(compositional_root(P("X^4-4X^2+2"), 2) == P("X^2-2"));
  CHECK(compositional_root(P("X^8"), 3) == P("X^2"));
  CHECK_FALSE(compositional_root(P("X^4+1"), 2).has_value());
  CHECK_THROWS_AS(compositional_root(P("X^6"), 2), DomainError);
  RatPoly g = P("-2X^3 + X^2 - 1/3 X + 5");
  CHECK(compositional_root(iterate(g, 2), 2) == g);
  CHECK(compositional_root(iterate(P("1/2 X^2 + 3X - 1"), 3), 3) == P("1/2 X^2 + 3X - 1"));
}

TEST_CASE("degree-multiple divisibility on constructed coincidences") {
  struct Case {
    RatPoly a, b, c, d;
  };
  std::vector<Case> cases = {
      {P("X^6"), P("X^2"), P("X^3"), P("X^4")},
      {chebyshev_t(6), chebyshev_t(2), chebyshev_t(3), chebyshev_t(4)},
      {P("X^2 (X^2+1)^2"), P("X^2"), P("X^2"), P("X^2 (X^4+1)")},
      {compose(P("X^2+X"), P("X^3-X")), P("X^2+1"), P("X^2+X"), compose(P("X^3-X"), P("X^2+1"))},
  };
  for (const auto& c : cases) {
    REQUIRE(compose(c.a, c.b) == compose(c.c, c.d));
    REQUIRE(c.a.degree() % c.c.degree() == 0);
    auto ts = left_divide(c.a, c.c);
    CHECK_FALSE(ts.empty());
    for (const auto& t : ts) CHECK(compose(c.c, t) == c.a);
  }
}

TEST_CASE("decompositions of Chebyshev polynomials have the expected shape") {
  for (unsigned long n = 2; n <= 12; ++n) {
    for (const auto& split : bidecompositions(chebyshev_t(n))) {
      const unsigned long m = split.inner.degree();
      auto mu = right_divide(split.inner, chebyshev_t(m));
      REQUIRE(mu);
      REQUIRE(mu->degree() == 1);
      LinearMap ell = LinearMap::from_poly(*mu).inverse();
      CHECK(split.outer == compose(chebyshev_t(n / m), ell));
    }
  }
}

TEST_CASE("decompositions of X^i h^n keep the shape") {
  // X^3 (X^3+1)^2 and X^2 (X^2+1)^3; exponents coprime in both.
  struct Case {
    RatPoly target;
    unsigned long n;
  };
  for (const auto& c : {Case{P("X^3 (X^3+1)^2"), 2}, Case{P("X^2 (X^2+1)^3"), 3}}) {
    auto splits = bidecompositions(c.target);
    CHECK_FALSE(splits.empty());
    for (const auto& s : splits) {
      CHECK(has_power_shape_up_to_linear(s.outer, c.n));
      CHECK(has_power_shape_at_zero(s.inner, c.n));
    }
  }
}

TEST_CASE("decompositions of iterates follow the iterate structure") {
  RatPoly f = P("X^3+X+1");
  const double k_bound = std::log2(3.0 + 2.0);
  for (unsigned long d : {2UL, 3UL}) {
    RatPoly fd = iterate(f, d);
    auto splits = bidecompositions(fd);
    CHECK(splits.size() == d - 1);
    for (const auto& split : splits) {
      bool matched = false;
      for (unsigned long i = 0; i <= d && !matched; ++i) {
        for (unsigned long j = 0; i + j <= d && !matched; ++j) {
          unsigned long k = d - i - j;
          if (k > k_bound) continue;
          auto Rs = left_divide(split.outer, iterate(f, i));
          auto S = right_divide(split.inner, iterate(f, j));
          if (!S) continue;
          for (const auto& R : Rs) matched = matched || compose(R, *S) == iterate(f, k);
        }
      }
      CHECK(matched);
    }
  }
}
