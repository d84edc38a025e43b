#include "orbitlab/heights.hpp"

#include <mpfr.h>

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include "orbitlab/errors.hpp"
#include "orbitlab/poly_algebra.hpp"

namespace orbitlab {

namespace {

constexpr mpfr_prec_t kPrecision = 256;

// RAII wrapper; only the handful of operations used below.
class Real {
 public:
  Real() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// log(n) for n >= 1, rounded in direction rnd.
void log_of(Real& out, const Integer& n, mpfr_rnd_t rnd) {
  mpfr_set_z(out.get(), n.get_mpz_t(), rnd);
  mpfr_log(out.get(), out.get(), rnd);
}

Integer height_argument(const Rational& x) {
  Integer p = abs(x.get_num());
  const Integer& q = x.get_den();
  return p > q ? p : q;
}

std::size_t bit_size(const Rational& x) {
  return std::max(mpz_sizeinbase(x.get_num_mpz_t(), 2), mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

void require_degree(const RatPoly& f) {
  if (f.degree() < 2) throw DomainError("height machinery needs deg f >= 2, got " + to_string(f));
}

Integer l1_norm(const RatPoly& p) {
  Integer s = 0;
  for (const auto& c : p.coefficients()) s += abs(c.get_num());
  return s;
}

struct GapData {
  Integer up_arg;   // C_up = log(up_arg)
  Integer low_arg;  // C_low = log(low_arg)
};

// With D the common denominator of f and F = D f in Z[X], homogenize F and
// G = D Q^d at z = P/Q. Then max(|F|,|G|) <= max(|F|_1, D) H^d, giving C_up.
// For C_low, X^(2d-1) = a F + r with deg r < d gives L1 P^(2d-1) as an integer
// combination of F and G (L1 clears denominators of a and r/D); likewise
// D Q^(2d-1) = Q^(d-1) G. These bound max(|F|,|G|) below by H^d / K and the
// common factor of F and G by L1 D.
GapData gap_data(const RatPoly& f) {
  require_degree(f);
  const auto d = static_cast<std::size_t>(f.degree());
  Integer D = lcm_of_denominators(f.coefficients());
  RatPoly F = f * Rational(D);
  GapData out;
  Integer s = l1_norm(F);
  out.up_arg = s > D ? s : D;

  auto [a, r] = divmod(RatPoly::monomial(Rational(1), 2 * d - 1), F);
  RatPoly b = r * Rational(1 / Rational(D));
  std::vector<Rational> all = a.coefficients();
  all.insert(all.end(), b.coefficients().begin(), b.coefficients().end());
  Integer L1 = lcm_of_denominators(all);
  Integer K = l1_norm(a * Rational(L1)) + l1_norm(b * Rational(L1));
  if (K < 1) K = 1;
  out.low_arg = K * L1 * D;
  return out;
}

double log_up(const Integer& n) {
  Real r;
  log_of(r, n, MPFR_RNDU);
  return mpfr_get_d(r.get(), MPFR_RNDU);
}

}  // namespace

std::size_t default_bit_budget() {
  if (const char* env = std::getenv("ORBITLAB_BIT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 24;
}

double weil_height(const Rational& x) {
  Real r;
  log_of(r, height_argument(x), MPFR_RNDN);
  return mpfr_get_d(r.get(), MPFR_RNDN);
}

GapConstants gap_constants(const RatPoly& f) {
  GapData g = gap_data(f);
  return {log_up(g.up_arg), log_up(g.low_arg)};
}

double escape_threshold(const RatPoly& f) {
  GapConstants c = gap_constants(f);
  return 2.0 * c.c_low / static_cast<double>(f.degree() - 1) + 1.0;
}

HeightValue canonical_height(const RatPoly& f, const Rational& x, double target_radius,
                             std::size_t bit_budget) {
  require_degree(f);
  if (!(target_radius > 0)) throw DomainError("target radius must be positive");
  const GapConstants c = gap_constants(f);
  const auto d = static_cast<unsigned long>(f.degree());

  // ĥ(x) - h(z_k)/d^k lies in [-C_low, C_up] / (d^k (d-1)); pick the least k
  // whose half-width fits, leaving room for the final rounding.
  const double slack = 8 * DBL_EPSILON;
  const double spread = (c.c_up + c.c_low) / 2.0 / static_cast<double>(d - 1);
  unsigned long k = 0;
  double scale = 1;
  while (spread / scale > target_radius * 0.5) {
    scale *= static_cast<double>(d);
    ++k;
  }

  Rational z = x;
  std::set<Rational> seen{z};
  for (unsigned long step = 0; step < k; ++step) {
    z = f(z);
    if (!seen.insert(z).second) return {0, 0, true, step + 1};
    if (bit_size(z) > bit_budget) {
      throw BudgetExceeded("canonical height: iterate " + std::to_string(step + 1) +
                               " exceeds the bit budget of " + std::to_string(bit_budget),
                           step);
    }
  }

  Real h;
  log_of(h, height_argument(z), MPFR_RNDN);
  Real dk;
  mpfr_ui_pow_ui(dk.get(), d, k, MPFR_RNDN);
  mpfr_div(h.get(), h.get(), dk.get(), MPFR_RNDN);
  const double base = mpfr_get_d(h.get(), MPFR_RNDN);
  const double width = static_cast<double>(d - 1) * scale;
  double lo = base - c.c_low / width;
  double hi = base + c.c_up / width;
  if (lo < 0) lo = 0;  // canonical heights are nonnegative
  if (hi < lo) hi = lo;
  HeightValue out;
  out.value = (lo + hi) / 2;
  out.radius = (hi - lo) / 2 + slack * std::max(1.0, std::abs(base));
  out.iterations = k;
  return out;
}

bool is_preperiodic(const RatPoly& f, const Rational& x) {
  GapData g = gap_data(f);
  // Escape once log H(z) > 2 log(low_arg)/(d-1) + 1, i.e. H(z)^(d-1) > low_arg^2 e^(d-1).
  // Compare exactly against an integer bound that is rounded up.
  const auto dm1 = static_cast<unsigned long>(f.degree() - 1);
  Real e;
  mpfr_set_ui(e.get(), dm1, MPFR_RNDU);
  mpfr_exp(e.get(), e.get(), MPFR_RNDU);
  mpfr_ceil(e.get(), e.get());
  Integer ebound;
  mpfr_get_z(ebound.get_mpz_t(), e.get(), MPFR_RNDU);
  const Integer bound = g.low_arg * g.low_arg * ebound;

  std::set<Rational> seen;
  Rational z = x;
  while (seen.insert(z).second) {
    Integer hz;
    mpz_pow_ui(hz.get_mpz_t(), height_argument(z).get_mpz_t(), dm1);
    if (hz > bound) return false;
    z = f(z);
  }
  return true;
}

}  // namespace orbitlab
