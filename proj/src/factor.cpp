#include "orbitlab/factor.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <string>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

constexpr int kPrimalityReps = 30;
constexpr unsigned long kRhoIterations = 2000000;

const std::vector<unsigned long>& small_primes(unsigned long bound) {
  static std::mutex mu;
  static std::vector<unsigned long> primes;
  static unsigned long sieved = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (bound > sieved) {
    std::vector<bool> composite(bound + 1, false);
    primes.clear();
    for (unsigned long i = 2; i <= bound; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (unsigned long j = i * i; j <= bound; j += i) composite[j] = true;
    }
    sieved = bound;
  }
  return primes;
}

bool is_probable_prime(const Integer& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) > 0;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
Integer pollard_brent(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 20; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 128, spent = 0;
    auto step = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    while (g == 1 && spent < kRhoIterations) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        unsigned long batch = std::min(m, r - k);
        for (unsigned long i = 0; i < batch; ++i) {
          y = step(y);
          Integer diff = abs(x - y);
          q = (q * diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += batch;
        spent += batch;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = step(ys);
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

void split(const Integer& n, Factorization& out, const Integer& original) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  if (d == 0) {
    throw FactorizationFailure("could not factor " + original.get_str() + " (stuck on cofactor " +
                               n.get_str() + ")");
  }
  split(d, out, original);
  split(Integer(n / d), out, original);
}

}  // namespace

unsigned long default_factor_bound() {
  if (const char* env = std::getenv("ORBITLAB_FACTOR_BOUND")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 2) return v;
  }
  return 1000000;
}

Factorization factor_integer(const Integer& n, unsigned long trial_bound) {
  if (n == 0) throw DomainError("cannot factor zero");
  Integer rest = abs(n);
  Factorization out;
  for (unsigned long p : small_primes(std::max(trial_bound, 2UL))) {
    if (Integer(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++out[Integer(p)];
    }
  }
  split(rest, out, abs(n));
  return out;
}

std::vector<Integer> positive_divisors(const Integer& n, std::size_t cap) {
  std::vector<Integer> divs{1};
  for (const auto& [p, e] : factor_integer(n)) {
    std::size_t base = divs.size();
    if (base * (e + 1) > cap) {
      throw CapExceeded("divisor count of " + n.get_str() + " exceeds " + std::to_string(cap));
    }
    Integer pk = 1;
    for (unsigned long k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace orbitlab
