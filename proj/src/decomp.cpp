#include "orbitlab/decomp.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "orbitlab/poly_algebra.hpp"

namespace orbitlab {

namespace {

// Coefficients A_1..A_count of the formal power series (1 + H_1 y + H_2 y^2 + ...)^(1/k).
std::vector<Rational> series_root(const std::vector<Rational>& H, unsigned long k, std::size_t count) {
  std::vector<Rational> A(count + 1, Rational(0));
  A[0] = 1;
  const Rational alpha(1, k);
  for (std::size_t n = 1; n <= count; ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= n && j < H.size(); ++j) {
      if (sgn(H[j]) == 0) continue;
      acc += (alpha * static_cast<long>(j) - static_cast<long>(n - j)) * H[j] * A[n - j];
    }
    A[n] = acc / static_cast<long>(n);
  }
  return A;
}

// Inner factor b of degree m with leading coefficient beta and b(0) = 0 whose
// k-th power agrees with h / lc(h) * beta^k in the top m coefficients.
RatPoly top_matched_inner(const RatPoly& h, unsigned long m, const Rational& beta) {
  const int N = h.degree();
  const unsigned long k = N / m;
  std::vector<Rational> H(m, Rational(0));
  const Rational inv_lead = 1 / h.leading();
  for (unsigned long j = 1; j < m; ++j) H[j] = h.coeff(N - j) * inv_lead;
  std::vector<Rational> A = series_root(H, k, m - 1);
  std::vector<Rational> b(m + 1, Rational(0));
  b[m] = beta;
  for (unsigned long j = 1; j < m; ++j) b[m - j] = beta * A[j];
  return RatPoly(std::move(b));
}

bool chain_less(const RatPoly& a, const RatPoly& b) { return to_string(a) < to_string(b); }

}  // namespace

RatPoly DecompChain::composed() const {
  RatPoly acc = RatPoly::x();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = compose(*it, acc);
  return acc;
}

std::optional<RatPoly> right_divide(const RatPoly& h, const RatPoly& b) {
  if (b.degree() < 1) throw DomainError("right_divide by a constant polynomial");
  if (h.is_zero()) return RatPoly();
  if (h.degree() % b.degree() != 0) return std::nullopt;
  std::vector<Rational> digits;
  RatPoly rest = h;
  while (!rest.is_zero()) {
    auto [q, r] = divmod(rest, b);
    if (r.degree() > 0) return std::nullopt;
    digits.push_back(r.coeff(0));
    rest = std::move(q);
  }
  return RatPoly(std::move(digits));
}

std::vector<RatPoly> left_divide(const RatPoly& h, const RatPoly& a) {
  if (a.degree() < 1) throw DomainError("left_divide by a constant polynomial");
  const int N = h.degree();
  const unsigned long k = a.degree();
  if (N < 0 || N % k != 0) {
    throw DomainError("degree " + std::to_string(a.degree()) + " does not divide degree " +
                      std::to_string(N));
  }
  std::vector<RatPoly> out;
  if (N == 0) {
    for (const auto& root : rational_roots(a - h)) out.push_back(RatPoly::constant(root));
    return out;
  }
  const unsigned long m = N / k;
  for (const Rational& beta : rational_roots_of(Rational(h.leading() / a.leading()), k)) {
    RatPoly b = top_matched_inner(h, m, beta);
    // The constant term is the only coefficient that feels the lower terms of a.
    RatPoly trial = compose(a, b);
    Rational slope = a.leading() * static_cast<long>(k) * pow(beta, k - 1);
    Rational b0 = (h.coeff(N - m) - trial.coeff(N - m)) / slope;
    b += RatPoly::constant(b0);
    if (compose(a, b) == h) out.push_back(std::move(b));
  }
  return out;
}

std::optional<DecompPair> decompose_at(const RatPoly& h, unsigned long m) {
  const int N = h.degree();
  if (m == 0 || N < 1 || N % m != 0) {
    throw DomainError("split degree " + std::to_string(m) + " does not divide degree " +
                      std::to_string(N));
  }
  RatPoly b = top_matched_inner(h, m, Rational(1));
  auto a = right_divide(h, b);
  if (!a) return std::nullopt;
  return DecompPair{std::move(*a), std::move(b)};
}

std::vector<DecompPair> bidecompositions(const RatPoly& h) {
  std::vector<DecompPair> out;
  const int N = h.degree();
  for (int m = 2; m < N; ++m) {
    if (N % m != 0) continue;
    if (auto split = decompose_at(h, m)) out.push_back(std::move(*split));
  }
  return out;
}

bool is_indecomposable(const RatPoly& h) {
  return h.degree() >= 2 && bidecompositions(h).empty();
}

std::vector<DecompChain> complete_decompositions(const RatPoly& h, std::size_t cap) {
  if (h.degree() < 2) throw DomainError("complete decompositions need degree >= 2");
  std::map<std::string, std::vector<DecompChain>> memo;
  std::vector<DecompChain> found;

  // Chains are built by peeling off an indecomposable rightmost factor.
  auto chains_of = [&](auto&& self, const RatPoly& p) -> std::vector<DecompChain> {
    std::string key = to_string(p);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<DecompChain> result;
    auto splits = bidecompositions(p);
    if (splits.empty()) {
      result.push_back(DecompChain{{p}});
    } else {
      for (const auto& split : splits) {
        if (!is_indecomposable(split.inner)) continue;
        for (auto chain : self(self, split.outer)) {
          chain.factors.push_back(split.inner);
          result.push_back(std::move(chain));
          if (result.size() > cap) {
            result.pop_back();
            throw DecompositionCapExceeded(
                "more than " + std::to_string(cap) + " complete decompositions of " + to_string(h),
                std::move(result));
          }
        }
      }
    }
    memo.emplace(key, result);
    return result;
  };

  found = chains_of(chains_of, h);
  std::sort(found.begin(), found.end(), [](const DecompChain& x, const DecompChain& y) {
    return std::lexicographical_compare(x.factors.begin(), x.factors.end(), y.factors.begin(),
                                        y.factors.end(), chain_less);
  });
  return found;
}

std::optional<RatPoly> compositional_root(const RatPoly& h, unsigned long n) {
  if (n == 0) throw DomainError("compositional root of order 0");
  const int N = h.degree();
  auto d_root = N >= 1 ? exact_root(Integer(N), n) : std::nullopt;
  if (!d_root || *d_root < 2) {
    throw DomainError("degree " + std::to_string(N) + " is not an " + std::to_string(n) +
                      "-th power of an integer >= 2");
  }
  if (n == 1) return h;
  const unsigned long d = d_root->get_ui();

  // g = u*s + v with s the normalized inner factor of degree d.
  auto split = decompose_at(h, d);
  if (!split) return std::nullopt;
  const RatPoly& s = split->inner;
  const RatPoly& A = split->outer;  // iterate(g, n-1) o (uX + v)
  unsigned long e = 0;
  for (unsigned long i = 0, p = 1; i < n; ++i, p *= d) e += p;
  const unsigned long D = A.degree();

  for (const Rational& u : rational_roots_of(h.leading(), e)) {
    if (sgn(u) == 0) continue;
    RatPoly G0 = iterate(RatPoly(s * u), n - 1);
    Rational uD1 = pow(u, D - 1);
    Rational v = (A.coeff(D - 1) - G0.coeff(D - 1) * uD1) / (G0.coeff(D) * static_cast<long>(D) * uD1);
    RatPoly g = s * u + RatPoly::constant(v);
    if (iterate(g, n) == h) return g;
  }
  return std::nullopt;
}

}  // namespace orbitlab
