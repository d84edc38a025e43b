#include "orbitlab/intersect.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "orbitlab/decomp.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/normal_forms.hpp"

namespace orbitlab {

namespace {

std::size_t bit_size(const Rational& x) {
  return std::max(mpz_sizeinbase(x.get_num_mpz_t(), 2), mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

// Sparse exponent vector indexed by primes; zero entries are never stored.
using Valuation = std::map<Integer, Integer>;

Valuation valuation(const Rational& q, unsigned long bound) {
  Valuation v;
  for (const auto& [p, e] : factor_integer(q.get_num(), bound)) v[p] += e;
  for (const auto& [p, e] : factor_integer(q.get_den(), bound)) v[p] -= e;
  return v;
}

Valuation combine(const Valuation& a, const Integer& ca, const Valuation& b, const Integer& cb) {
  Valuation out;
  for (const auto& [p, e] : a) out[p] += ca * e;
  for (const auto& [p, e] : b) out[p] += cb * e;
  for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

Integer at(const Valuation& v, const Integer& p) {
  auto it = v.find(p);
  return it == v.end() ? Integer(0) : it->second;
}

std::set<Integer> support(std::initializer_list<const Valuation*> vs) {
  std::set<Integer> out;
  for (const auto* v : vs) {
    for (const auto& kv : *v) out.insert(kv.first);
  }
  return out;
}

// The unique integers (x, y) with x A - y B = C when A and B are independent.
std::optional<std::pair<Integer, Integer>> solve_independent(const Valuation& A, const Valuation& B,
                                                             const Valuation& C) {
  const auto primes = support({&A, &B, &C});
  for (auto p = primes.begin(); p != primes.end(); ++p) {
    for (auto q = std::next(p); q != primes.end(); ++q) {
      Integer det = at(A, *p) * at(B, *q) - at(A, *q) * at(B, *p);
      if (sgn(det) == 0) continue;
      Integer xn = at(C, *p) * at(B, *q) - at(B, *p) * at(C, *q);
      Integer yn = at(A, *q) * at(C, *p) - at(A, *p) * at(C, *q);
      if (!mpz_divisible_p(xn.get_mpz_t(), det.get_mpz_t()) ||
          !mpz_divisible_p(yn.get_mpz_t(), det.get_mpz_t())) {
        return std::nullopt;
      }
      Integer x = xn / det;
      Integer y = yn / det;
      if (combine(A, x, B, Integer(-y)) != C) return std::nullopt;
      return std::make_pair(x, y);
    }
  }
  throw Error("internal: expected independent exponent vectors");
}

// Exponent e >= 0 with base^e == value, for value >= 1.
std::optional<unsigned long> power_index(const Integer& value, unsigned long base) {
  if (value < 1) return std::nullopt;
  if (value == 1) return 0UL;
  return exact_log(value, Integer(base));
}

// d = t^a with t not a perfect power.
std::pair<Integer, unsigned long> perfect_power_base(unsigned long d) {
  auto fac = factor_integer(Integer(d));
  unsigned long g = 0;
  for (const auto& kv : fac) g = std::gcd(g, kv.second);
  Integer t = 1;
  for (const auto& [p, e] : fac) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / g);
    t *= pe;
  }
  return {t, g};
}

Integer ipow(unsigned long base, unsigned long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

// x -> alpha x^r started at x0.
struct PowerOrbit {
  Rational alpha;
  unsigned long r;
  Rational x0;

  RatPoly poly() const { return RatPoly::monomial(alpha, r); }

  Rational value_at(unsigned long m) const {
    Rational z = x0;
    for (unsigned long i = 0; i < m; ++i) z = alpha * pow(z, r);
    return z;
  }

  // Sign of the m-th iterate without computing it: alpha^((r^m-1)/(r-1)) x0^(r^m).
  int sign_at(unsigned long m) const {
    if (sgn(x0) == 0) return 0;
    if (m == 0) return sgn(x0);
    const bool alpha_odd_power = (r % 2 == 1) ? (m % 2 == 1) : true;
    int s = 1;
    if (alpha_odd_power && sgn(alpha) < 0) s = -s;
    if (r % 2 == 1 && sgn(x0) < 0) s = -s;
    return s;
  }

  // The m-th iterate of alpha X^r as a monomial.
  RatPoly iterate_poly(unsigned long m) const {
    Integer T = ipow(r, m);
    if (T > kMaxExpandedDegree) throw BudgetExceeded("power-map iterate degree exceeds cap", 0);
    const unsigned long t = T.get_ui();
    return RatPoly::monomial(pow(alpha, (t - 1) / (r - 1)), t);
  }
};

IntersectionReport degenerate_report(const PowerOrbit& F, bool f_finite, const Valuation& Vf,
                                     const PowerOrbit& G, bool g_finite, const Valuation& Vg,
                                     unsigned long bound) {
  IntersectionReport out;
  out.degenerate = true;
  out.completeness = Completeness::Proven;
  out.note = "an orbit is finite; each common value is listed once with its least indices";

  auto finite_values = [](const PowerOrbit& o) {
    OrbitTrace t = orbit(o.poly(), o.x0, {16, std::size_t{1} << 20});
    if (t.status != OrbitTrace::Status::Preperiodic) throw Error("internal: torsion orbit did not cycle");
    std::vector<std::pair<Rational, unsigned long>> vals;
    for (unsigned long i = 0; i + 1 < t.points.size(); ++i) vals.emplace_back(t.points[i], i);
    return vals;
  };
  // Index n with o^n(x0) == v on a wandering orbit: S (o.r - 1) val-equation.
  auto index_of = [bound](const PowerOrbit& o, const Valuation& V, const Rational& v)
      -> std::optional<unsigned long> {
    if (sgn(v) == 0) return std::nullopt;
    Valuation va = valuation(o.alpha, bound);
    Valuation target = combine(valuation(v, bound), Integer(o.r - 1), va, Integer(1));
    const auto& [p, vp] = *V.begin();
    Integer tp = at(target, p);
    if (!mpz_divisible_p(tp.get_mpz_t(), vp.get_mpz_t())) return std::nullopt;
    Integer S = tp / vp;
    if (combine(V, S, target, Integer(-1)) != Valuation{}) return std::nullopt;
    auto n = power_index(S, o.r);
    if (!n || o.value_at(*n) != v) return std::nullopt;
    return n;
  };

  if (f_finite && g_finite) {
    auto fv = finite_values(F);
    auto gv = finite_values(G);
    for (const auto& [v, m] : fv) {
      for (const auto& [w, n] : gv) {
        if (v == w) out.finite_points.push_back({v, m, n});
      }
    }
  } else if (f_finite) {
    for (const auto& [v, m] : finite_values(F)) {
      if (auto n = index_of(G, Vg, v)) out.finite_points.push_back({v, m, *n});
    }
  } else {
    for (const auto& [w, n] : finite_values(G)) {
      if (auto m = index_of(F, Vf, w)) out.finite_points.push_back({w, *m, n});
    }
  }
  std::sort(out.finite_points.begin(), out.finite_points.end(),
            [](const OrbitHit& a, const OrbitHit& b) { return std::tie(a.m, a.n) < std::tie(b.m, b.n); });
  return out;
}

void add_hit(IntersectionReport& out, const PowerOrbit& F, const PowerOrbit& G, unsigned long m,
             unsigned long n) {
  if (F.sign_at(m) != G.sign_at(n)) return;
  out.finite_points.push_back({F.value_at(m), m, n});
}

// All (m, n) on the progression m = m0 + k dm, n = n0 + k dn (k >= 0) whose
// magnitudes already agree; keeps those with matching signs.
void progression_report(IntersectionReport& out, const PowerOrbit& F, const PowerOrbit& G,
                        unsigned long m0, unsigned long n0, unsigned long dm, unsigned long dn) {
  auto valid = [&](unsigned long k) { return F.sign_at(m0 + k * dm) == G.sign_at(n0 + k * dn); };
  const bool v0 = valid(0), v1 = valid(1), v2 = valid(2);
  std::optional<std::pair<unsigned long, unsigned long>> fam;  // (first k, stride in k)
  bool extra0 = false;
  if (v1 && v2) {
    fam = {v0 ? 0 : 1, 1};
  } else if (v1) {
    fam = {1, 2};
    extra0 = v0;
  } else if (v2) {
    fam = {v0 ? 0 : 2, 2};
  } else {
    extra0 = v0;
  }
  if (extra0) out.finite_points.push_back({F.value_at(m0), m0, n0});
  if (!fam) return;
  InfiniteFamily family;
  family.m0 = m0 + fam->first * dm;
  family.n0 = n0 + fam->first * dn;
  family.dm = fam->second * dm;
  family.dn = fam->second * dn;
  RatPoly fi = F.iterate_poly(family.dm);
  if (fi != G.iterate_poly(family.dn)) throw Error("internal: orbit family without a common iterate");
  family.common_iterate = std::move(fi);
  out.infinite_family = std::move(family);
}

}  // namespace

OrbitTrace orbit(const RatPoly& f, const Rational& x0, const OrbitBudget& budget) {
  if (budget.max_steps == 0 || budget.max_bits == 0) throw DomainError("orbit budget must be positive");
  OrbitTrace t;
  t.start = x0;
  t.points.push_back(x0);
  std::map<Rational, unsigned long> index{{x0, 0}};
  while (t.steps < budget.max_steps) {
    Rational next = f(t.points.back());
    t.points.push_back(next);
    ++t.steps;
    auto [it, inserted] = index.emplace(next, t.points.size() - 1);
    if (!inserted) {
      t.status = OrbitTrace::Status::Preperiodic;
      t.tail_length = it->second;
      t.cycle_length = t.points.size() - 1 - it->second;
      return t;
    }
    if (bit_size(next) > budget.max_bits) {
      t.height_capped = true;
      return t;
    }
  }
  return t;
}

ExponentLattice multiplicative_lattice(const std::vector<Rational>& xs, unsigned long factor_bound) {
  ExponentLattice out;
  out.generators = xs;
  const std::size_t n = xs.size();
  std::vector<std::size_t> free_idx;
  std::optional<std::size_t> minus_one;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(xs[i]) == 0) throw DomainError("multiplicative lattice of 0");
    if (abs(xs[i]) == 1) {
      std::vector<Integer> e(n, Integer(0));
      e[i] = xs[i] == 1 ? 1 : 2;
      out.sign_relations.push_back(std::move(e));
      if (xs[i] == -1 && !minus_one) minus_one = i;
    } else {
      free_idx.push_back(i);
    }
  }
  const std::size_t k = free_idx.size();
  std::vector<Valuation> vals;
  for (std::size_t i : free_idx) {
    try {
      vals.push_back(valuation(xs[i], factor_bound));
    } catch (const FactorizationFailure& e) {
      throw FactorizationFailure("cannot factor generator " + to_string(xs[i]) + ": " + e.what());
    }
  }
  std::vector<Integer> primes;
  {
    std::set<Integer> ps;
    for (const auto& v : vals) {
      for (const auto& kv : v) ps.insert(kv.first);
    }
    primes.assign(ps.begin(), ps.end());
  }

  // Column echelon of [M; I]: columns past the last pivot span ker M.
  const std::size_t rows = primes.size();
  std::vector<std::vector<Integer>> cols(k, std::vector<Integer>(rows + k, Integer(0)));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < rows; ++r) cols[c][r] = at(vals[c], primes[r]);
    cols[c][rows + c] = 1;
  }
  std::size_t pivot = 0;
  for (std::size_t r = 0; r < rows && pivot < k; ++r) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t c = pivot; c < k; ++c) {
        if (sgn(cols[c][r]) != 0 && (!best || abs(cols[c][r]) < abs(cols[*best][r]))) best = c;
      }
      if (!best) break;
      std::swap(cols[pivot], cols[*best]);
      bool done = true;
      for (std::size_t c = pivot + 1; c < k; ++c) {
        if (sgn(cols[c][r]) == 0) continue;
        Integer q = cols[c][r] / cols[pivot][r];
        for (std::size_t i = 0; i < rows + k; ++i) cols[c][i] -= q * cols[pivot][i];
        if (sgn(cols[c][r]) != 0) done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  std::vector<std::vector<Integer>> basis;
  for (std::size_t c = pivot; c < k; ++c) basis.emplace_back(cols[c].begin() + rows, cols[c].end());

  auto parity = [&](const std::vector<Integer>& e) {
    Integer s = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (sgn(xs[free_idx[j]]) < 0) s += e[j];
    }
    return mpz_odd_p(s.get_mpz_t()) != 0;
  };
  if (!minus_one) {
    // Relations with an odd number of negative factors multiply to -1.
    auto odd = std::find_if(basis.begin(), basis.end(), parity);
    if (odd != basis.end()) {
      const std::vector<Integer> b0 = *odd;
      for (auto& b : basis) {
        if (&b == &*odd) continue;
        if (parity(b)) {
          for (std::size_t j = 0; j < k; ++j) b[j] -= b0[j];
        }
      }
      for (auto& x : *odd) x *= 2;
    }
  }

  // Row Hermite normal form for a canonical basis.
  std::size_t top = 0;
  for (std::size_t c = 0; c < k && top < basis.size(); ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t r = top; r < basis.size(); ++r) {
        if (sgn(basis[r][c]) != 0 && (!best || abs(basis[r][c]) < abs(basis[*best][c]))) best = r;
      }
      if (!best) break;
      std::swap(basis[top], basis[*best]);
      bool done = true;
      for (std::size_t r = top + 1; r < basis.size(); ++r) {
        if (sgn(basis[r][c]) == 0) continue;
        Integer q = basis[r][c] / basis[top][c];
        for (std::size_t j = 0; j < k; ++j) basis[r][j] -= q * basis[top][j];
        if (sgn(basis[r][c]) != 0) done = false;
      }
      if (!done) continue;
      if (sgn(basis[top][c]) < 0) {
        for (auto& x : basis[top]) x = -x;
      }
      for (std::size_t r = 0; r < top; ++r) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), basis[r][c].get_mpz_t(), basis[top][c].get_mpz_t());
        for (std::size_t j = 0; j < k; ++j) basis[r][j] -= q * basis[top][j];
      }
      ++top;
      break;
    }
  }

  for (const auto& b : basis) {
    std::vector<Integer> e(n, Integer(0));
    for (std::size_t j = 0; j < k; ++j) e[free_idx[j]] = b[j];
    if (minus_one && parity(b)) e[*minus_one] = 1;
    out.relation_basis.push_back(std::move(e));
  }
  return out;
}

const char* to_string(Completeness c) {
  return c == Completeness::Proven ? "Proven" : "BoundedSearchOnly";
}

const char* to_string(CommonIterateResult::Verdict v) {
  switch (v) {
    case CommonIterateResult::Verdict::Never: return "Never";
    case CommonIterateResult::Verdict::Found: return "Found";
    case CommonIterateResult::Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

IntersectionReport power_map_intersection_exact(const Rational& alpha, unsigned long r,
                                                const Rational& beta, unsigned long s,
                                                const Rational& x0, const Rational& y0,
                                                unsigned long search_bound) {
  if (sgn(alpha) == 0 || sgn(beta) == 0) throw DomainError("power maps need nonzero coefficients");
  if (r < 2 || s < 2) throw DomainError("power maps need exponents >= 2");
  const unsigned long bound = default_factor_bound();
  const PowerOrbit F{alpha, r, x0};
  const PowerOrbit G{beta, s, y0};

  // Writing the iterates as alpha^((R-1)/(r-1)) x0^R with R = r^m (and S = s^n
  // for g), equal magnitudes amount to R U - S V = W over prime exponents.
  const Valuation va = valuation(alpha, bound);
  const Valuation vb = valuation(beta, bound);
  const Valuation vx = sgn(x0) != 0 ? valuation(x0, bound) : Valuation{};
  const Valuation vy = sgn(y0) != 0 ? valuation(y0, bound) : Valuation{};
  const Valuation Uf = combine(va, 1, vx, Integer(r - 1));  // exponents of x1^(r-1)
  const Valuation Vg = combine(vb, 1, vy, Integer(s - 1));
  const bool f_finite = sgn(x0) == 0 || Uf.empty();
  const bool g_finite = sgn(y0) == 0 || Vg.empty();
  if (f_finite || g_finite) return degenerate_report(F, f_finite, Uf, G, g_finite, Vg, bound);

  IntersectionReport out;
  out.completeness = Completeness::Proven;
  const Valuation U = combine(Uf, Integer(s - 1), {}, 0);
  const Valuation V = combine(Vg, Integer(r - 1), {}, 0);
  const Valuation W = combine(va, Integer(s - 1), vb, Integer(-static_cast<long>(r - 1)));

  const auto& [p0, Vp0] = *V.begin();
  const Integer Up0 = at(U, p0);
  bool dependent = true;
  for (const auto& p : support({&U, &V})) {
    if (at(U, p) * Vp0 != Up0 * at(V, p)) dependent = false;
  }

  if (!dependent) {
    if (auto sol = solve_independent(U, V, W)) {
      auto m = power_index(sol->first, r);
      auto n = power_index(sol->second, s);
      if (m && n) add_hit(out, F, G, *m, *n);
    }
    return out;
  }

  for (const auto& p : support({&W, &V})) {
    if (at(W, p) * Vp0 != at(W, p0) * at(V, p)) return out;  // W not on the line of V
  }
  const Integer lambda = Up0, mu = Vp0, nu = at(W, p0);
  const auto [tr, a] = perfect_power_base(r);
  const auto [ts, b] = perfect_power_base(s);

  if (sgn(nu) == 0) {
    // lambda r^m = mu s^n.
    Rational ratio(mu, lambda);
    ratio.canonicalize();
    if (sgn(ratio) <= 0) return out;
    if (tr == ts) {
      // t^(a m - b n) = ratio.
      const Integer& t = tr;
      long c = 0;
      if (ratio.get_den() == 1) {
        auto e = power_index(ratio.get_num(), t.get_ui());
        if (!e) return out;
        c = static_cast<long>(*e);
      } else {
        if (ratio.get_num() != 1) return out;
        auto e = power_index(ratio.get_den(), t.get_ui());
        if (!e) return out;
        c = -static_cast<long>(*e);
      }
      const long la = static_cast<long>(a), lb = static_cast<long>(b);
      const long g = std::gcd(la, lb);
      if (c % g != 0) return out;
      // Extended Euclid for la x + lb y = g.
      long old_r = la, rr = lb, old_x = 1, x = 0, old_y = 0, y = 1;
      while (rr != 0) {
        long q = old_r / rr;
        std::tie(old_r, rr) = std::make_pair(rr, old_r - q * rr);
        std::tie(old_x, x) = std::make_pair(x, old_x - q * x);
        std::tie(old_y, y) = std::make_pair(y, old_y - q * y);
      }
      const long dm = lb / g, dn = la / g;
      long mp = old_x * (c / g), np = -old_y * (c / g);
      auto ceil_div = [](long num, long den) { return num >= 0 ? (num + den - 1) / den : -((-num) / den); };
      long k0 = std::max(ceil_div(-mp, dm), ceil_div(-np, dn));
      const long m0 = mp + k0 * dm, n0 = np + k0 * dn;
      progression_report(out, F, G, static_cast<unsigned long>(m0), static_cast<unsigned long>(n0),
                         static_cast<unsigned long>(dm), static_cast<unsigned long>(dn));
    } else {
      Valuation vr = valuation(Rational(static_cast<long>(r)), bound);
      Valuation vs = valuation(Rational(static_cast<long>(s)), bound);
      if (auto sol = solve_independent(vr, vs, valuation(ratio, bound))) {
        if (sgn(sol->first) >= 0 && sgn(sol->second) >= 0) {
          add_hit(out, F, G, sol->first.get_ui(), sol->second.get_ui());
        }
      }
    }
    return out;
  }

  // lambda r^m - mu s^n = nu with nu != 0: never an infinite family.
  auto check = [&](unsigned long m, unsigned long n) {
    if (lambda * ipow(r, m) - mu * ipow(s, n) == nu) add_hit(out, F, G, m, n);
  };
  if (tr == ts) {
    // With r = t^a, s = t^b: t^min(am, bn) divides nu, which bounds both exponents.
    const unsigned long t = tr.get_ui();
    unsigned long E = 0;
    for (Integer tp = t; tp <= abs(nu); tp *= t) ++E;
    Integer big = abs(nu) + std::max(abs(lambda), abs(mu)) * ipow(t, E);
    Integer small = std::min(abs(lambda), abs(mu));
    unsigned long emax = 0;
    for (Integer tp = small * t; tp <= big; tp *= t) ++emax;
    for (unsigned long m = 0; m * a <= emax; ++m) {
      for (unsigned long n = 0; n * b <= emax; ++n) check(m, n);
    }
    return out;
  }
  out.completeness = Completeness::BoundedSearchOnly;
  out.note = "affine exponent equation with independent degrees; searched up to the bound";
  for (unsigned long m = 0; m <= search_bound; ++m) {
    Integer rhs = lambda * ipow(r, m) - nu;
    if (!mpz_divisible_p(rhs.get_mpz_t(), mu.get_mpz_t())) continue;
    Integer S = rhs / mu;
    if (auto n = power_index(S, s); n && *n <= search_bound) check(m, *n);
  }
  return out;
}

namespace {

struct PowerPair {
  LinearMap ell;  // ell o f o ell^-1 = alpha X^r, ell o g o ell^-1 = beta X^s
  Rational alpha, beta;
  unsigned long r, s;
};

std::optional<std::pair<Rational, unsigned long>> as_monomial(const RatPoly& p) {
  const auto& c = p.coefficients();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (sgn(c[i]) != 0) return std::nullopt;
  }
  return std::make_pair(p.leading(), static_cast<unsigned long>(p.degree()));
}

std::optional<PowerPair> power_pair(const RatPoly& f, const RatPoly& g) {
  for (int swap = 0; swap < 2; ++swap) {
    const RatPoly& a = swap ? g : f;
    NormalFormReport nf = conjugacy_normal_form(a);
    if (nf.kind != NormalFormReport::Kind::PowerLike) continue;
    auto F = as_monomial(conjugate(f, nf.witness));
    auto G = as_monomial(conjugate(g, nf.witness));
    if (F && G) return PowerPair{nf.witness, F->first, G->first, F->second, G->second};
  }
  return std::nullopt;
}

}  // namespace

IntersectionReport orbit_intersection(const RatPoly& f, const RatPoly& g, const Rational& x0,
                                      const Rational& y0, const OrbitBudget& budget) {
  if (f.degree() < 2 || g.degree() < 2) throw DomainError("orbit intersection needs degrees >= 2");
  if (auto pp = power_pair(f, g)) {
    IntersectionReport rep =
        power_map_intersection_exact(pp->alpha, pp->r, pp->beta, pp->s, pp->ell(x0), pp->ell(y0));
    const LinearMap back = pp->ell.inverse();
    for (auto& hit : rep.finite_points) hit.value = back(hit.value);
    if (rep.infinite_family) {
      rep.infinite_family->common_iterate = conjugate(rep.infinite_family->common_iterate, back);
    }
    rep.note = rep.note.empty() ? "delegated to the power-map solver"
                                : "delegated to the power-map solver; " + rep.note;
    return rep;
  }

  auto fut = std::async(std::launch::async, [&] { return orbit(g, y0, budget); });
  OrbitTrace tf = orbit(f, x0, budget);
  OrbitTrace tg = fut.get();
  auto distinct = [](const OrbitTrace& t) {
    std::size_t n = t.points.size();
    return t.status == OrbitTrace::Status::Preperiodic ? n - 1 : n;
  };
  std::map<Rational, std::vector<unsigned long>> g_index;
  for (unsigned long n = 0; n < distinct(tg); ++n) g_index[tg.points[n]].push_back(n);
  std::vector<OrbitHit> hits;
  for (unsigned long m = 0; m < distinct(tf); ++m) {
    auto it = g_index.find(tf.points[m]);
    if (it == g_index.end()) continue;
    for (unsigned long n : it->second) hits.push_back({tf.points[m], m, n});
  }

  IntersectionReport rep;
  rep.completeness = Completeness::BoundedSearchOnly;
  rep.degenerate = tf.status == OrbitTrace::Status::Preperiodic ||
                   tg.status == OrbitTrace::Status::Preperiodic;
  // Two hits (m1, n1) < (m2, n2) whose index gap is a common iterate seed a family.
  for (std::size_t i = 0; i < hits.size() && !rep.infinite_family; ++i) {
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      if (hits[j].m <= hits[i].m || hits[j].n <= hits[i].n) continue;
      const unsigned long dm = hits[j].m - hits[i].m, dn = hits[j].n - hits[i].n;
      Integer df = ipow(static_cast<unsigned long>(f.degree()), dm);
      if (df != ipow(static_cast<unsigned long>(g.degree()), dn) || df > kMaxExpandedDegree) continue;
      RatPoly fi = iterate(f, dm);
      if (fi != iterate(g, dn)) continue;
      rep.infinite_family = InfiniteFamily{hits[i].m, hits[i].n, dm, dn, std::move(fi)};
      break;
    }
  }
  for (const auto& h : hits) {
    if (const auto& fam = rep.infinite_family) {
      if (h.m >= fam->m0 && (h.m - fam->m0) % fam->dm == 0 &&
          h.n == fam->n0 + (h.m - fam->m0) / fam->dm * fam->dn) {
        continue;
      }
    }
    rep.finite_points.push_back(h);
  }
  return rep;
}

namespace {

// Iterated evaluation modulo a prime, for cheap rejection of iterate equality.
class ModEval {
 public:
  ModEval(const RatPoly& f, std::uint64_t p) : p_(p) {
    for (const auto& c : f.coefficients()) {
      Integer den = c.get_den();
      if (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
        ok_ = false;
        return;
      }
      Integer inv, num = c.get_num(), mod = static_cast<unsigned long>(p);
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
      Integer v = num * inv;
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
      coeffs_.push_back(v.get_ui());
    }
  }
  bool ok() const { return ok_; }
  std::uint64_t iterate(std::uint64_t x, unsigned long n) const {
    for (unsigned long i = 0; i < n; ++i) {
      unsigned __int128 acc = 0;
      for (std::size_t j = coeffs_.size(); j-- > 0;) acc = (acc * x + coeffs_[j]) % p_;
      x = static_cast<std::uint64_t>(acc);
    }
    return x;
  }

 private:
  std::uint64_t p_;
  bool ok_ = true;
  std::vector<std::uint64_t> coeffs_;
};

bool modular_agree(const RatPoly& f, unsigned long m, const RatPoly& g, unsigned long n) {
  constexpr std::array<std::uint64_t, 3> primes = {1000000007ULL, 998244353ULL, 2305843009213693951ULL};
  for (std::uint64_t p : primes) {
    ModEval ef(f, p), eg(g, p);
    if (!ef.ok() || !eg.ok()) continue;
    for (std::uint64_t x : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL}) {
      if (ef.iterate(x, m) != eg.iterate(x, n)) return false;
    }
  }
  return true;
}

}  // namespace

CommonIterateResult common_iterate(const RatPoly& f, const RatPoly& g, unsigned long K) {
  if (f.degree() < 2 || g.degree() < 2) throw DomainError("common iterate needs degrees >= 2");
  const auto d1 = static_cast<unsigned long>(f.degree());
  const auto d2 = static_cast<unsigned long>(g.degree());
  CommonIterateResult out;
  const auto [t1, a] = perfect_power_base(d1);
  const auto [t2, b] = perfect_power_base(d2);
  if (t1 != t2) {
    out.verdict = CommonIterateResult::Verdict::Never;
    out.reason = "degrees " + std::to_string(d1) + " and " + std::to_string(d2) +
                 " are multiplicatively independent";
    return out;
  }
  const unsigned long g0 = std::gcd(a, b);
  const unsigned long m1 = b / g0, m2 = a / g0;
  for (unsigned long k = 1; k <= K; ++k) {
    const unsigned long M = k * m1, N = k * m2;
    if (!modular_agree(f, M, g, N)) continue;
    if (ipow(d1, M) > kMaxExpandedDegree) {
      out.reason = "iterates (" + std::to_string(M) + ", " + std::to_string(N) +
                   ") agree modulo primes but exceed the expansion cap";
      return out;
    }
    RatPoly fi = iterate(f, M);
    if (fi == iterate(g, N)) {
      out.verdict = CommonIterateResult::Verdict::Found;
      out.m1 = M;
      out.m2 = N;
      out.iterate = std::move(fi);
      return out;
    }
  }
  out.reason = "no common iterate with exponents up to " + std::to_string(K) + " x (" +
               std::to_string(m1) + ", " + std::to_string(m2) + ")";
  return out;
}

std::optional<CommensurabilityWitness> commensurability_witness(const RatPoly& f, const RatPoly& g,
                                                                unsigned long m, unsigned long N) {
  if (f.degree() < 2 || g.degree() < 2) throw DomainError("commensurability needs degrees >= 2");
  if (m == 0) throw DomainError("m must be positive");
  const Integer dfm = ipow(static_cast<unsigned long>(f.degree()), m);
  if (dfm > kMaxExpandedDegree) throw BudgetExceeded("deg f^m exceeds the expansion cap", 0);
  const RatPoly A = iterate(f, m);
  for (unsigned long n = 1; n <= N; ++n) {
    Integer dgn = ipow(static_cast<unsigned long>(g.degree()), n);
    if (dgn > kMaxExpandedDegree) break;
    if (!mpz_divisible_p(dgn.get_mpz_t(), dfm.get_mpz_t())) continue;
    auto hs = left_divide(iterate(g, n), A);
    if (hs.empty()) continue;
    auto best = std::find_if(hs.begin(), hs.end(), [](const RatPoly& h) { return sgn(h.leading()) > 0; });
    return CommensurabilityWitness{n, best != hs.end() ? *best : hs.front()};
  }
  return std::nullopt;
}

namespace {

Scalar scalar_pow(const Scalar& x, const Integer& e) {
  Scalar result = Scalar(1) + x * Scalar(0);  // carries the ring of x
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result *= result;
    if (mpz_tstbit(e.get_mpz_t(), i)) result *= x;
  }
  return result;
}

bool is_one(const Scalar& x) { return x == Scalar(1); }

bool ritt_identity(const RatPoly& f, const Scalar& beta, const ScalarPoly& gn, const Scalar& eps) {
  ScalarPoly shifted = compose(gn, ScalarPoly({beta, Scalar(1)}));
  ScalarPoly rhs = shifted * eps - ScalarPoly::constant(beta);
  return rhs == to_scalar_poly(f);
}

}  // namespace

bool verify_ritt_certificate(const RatPoly& f1, const RatPoly& f2, const RittCertificate& cert,
                             unsigned long m1, unsigned long m2) {
  if (cert.n1 == 0 || cert.n2 == 0 || m1 == 0 || m2 == 0) return false;
  if (cert.n1 * m1 != cert.n2 * m2) return false;
  if (f1.degree() < 1 || f2.degree() < 1 || cert.g.degree() < 1) return false;
  const auto& gc = cert.g.coefficients();
  for (std::size_t i = 0; i < gc.size(); ++i) {
    if (sgn(gc[i]) == 0) continue;
    if (i < cert.r) return false;
    if (cert.s == 0 ? i != cert.r : (i - cert.r) % cert.s != 0) return false;
  }
  try {
    for (int which = 0; which < 2; ++which) {
      const RatPoly& f = which == 0 ? f1 : f2;
      const Scalar& eps = which == 0 ? cert.eps1 : cert.eps2;
      const unsigned long n = which == 0 ? cert.n1 : cert.n2;
      const unsigned long m = which == 0 ? m1 : m2;
      if (ipow(static_cast<unsigned long>(cert.g.degree()), n) > kMaxExpandedDegree) return false;
      if (!ritt_identity(f, cert.beta, to_scalar_poly(iterate(cert.g, n)), eps)) return false;
      const auto d = static_cast<unsigned long>(f.degree());
      Integer E = d == 1 ? Integer(m) : Integer((ipow(d, m) - 1) / (d - 1));
      if (cert.s > 0) {
        if (!is_one(eps.pow(cert.s))) return false;
        E %= cert.s;
      }
      if (!is_one(scalar_pow(eps, E))) return false;
    }
  } catch (const RingMismatch&) {
    return false;
  }
  return true;
}

}  // namespace orbitlab
