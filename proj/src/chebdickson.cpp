#include "orbitlab/chebdickson.hpp"

#include <mutex>
#include <vector>

namespace orbitlab {

RatPoly chebyshev_t(unsigned long n) {
  static std::mutex mu;
  static std::vector<RatPoly> cache{RatPoly::constant(2), RatPoly::x()};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    const std::size_t k = cache.size();
    cache.push_back(RatPoly::x() * cache[k - 1] - cache[k - 2]);
  }
  return cache[n];
}

RatPoly classical_chebyshev(unsigned long n) {
  return compose(chebyshev_t(n), RatPoly({Rational(0), Rational(2)})) * Rational(1, 2);
}

}  // namespace orbitlab
