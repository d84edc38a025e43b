#include "orbitlab/scalar.hpp"

#include <sstream>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

void trim(std::vector<Rational>& c) {
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
}

std::string term_string(const Rational& coeff, std::size_t power, const std::string& var,
                        bool first) {
  std::string out;
  Rational mag = abs(coeff);
  if (first) {
    if (sgn(coeff) < 0) out += "-";
  } else {
    out += sgn(coeff) < 0 ? " - " : " + ";
  }
  if (power == 0) return out + to_string(mag);
  if (mag != 1) out += to_string(mag) + "*";
  out += var;
  if (power > 1) out += "^" + std::to_string(power);
  return out;
}

}  // namespace

RingPtr QuotientRing::make(std::vector<Rational> modulus, std::string variable) {
  trim(modulus);
  if (modulus.size() < 2) throw DomainError("quotient modulus must have degree >= 1");
  if (modulus.back() != 1) throw DomainError("quotient modulus must be monic");
  for (const auto& c : modulus) {
    if (c.get_den() != 1) throw DomainError("quotient modulus must have integer coefficients");
  }
  return RingPtr(new QuotientRing(std::move(modulus), std::move(variable)));
}

RingPtr QuotientRing::negacyclic(unsigned long k) {
  if (k == 0) throw DomainError("t^0 + 1 is not a valid modulus");
  std::vector<Rational> m(k + 1, Rational(0));
  m[0] = 1;
  m[k] = 1;
  return make(std::move(m));
}

RingPtr QuotientRing::square_root_of(long c) {
  return make({Rational(-c), Rational(0), Rational(1)});
}

void QuotientRing::reduce(std::vector<Rational>& coeffs) const {
  const std::size_t n = degree();
  for (std::size_t i = coeffs.size(); i-- > n;) {
    if (sgn(coeffs[i]) == 0) continue;
    Rational lead = coeffs[i];
    // t^i = t^(i-n) * t^n and t^n = -(m_0 + ... + m_{n-1} t^{n-1}).
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(modulus_[j]) != 0) coeffs[i - n + j] -= lead * modulus_[j];
    }
    coeffs[i] = 0;
  }
  trim(coeffs);
}

std::string QuotientRing::describe() const {
  std::string body;
  bool first = true;
  for (std::size_t i = modulus_.size(); i-- > 0;) {
    if (sgn(modulus_[i]) == 0) continue;
    body += term_string(modulus_[i], i, variable_, first);
    first = false;
  }
  return "Q[" + variable_ + "]/(" + body + ")";
}

Scalar::Scalar(const Rational& value) {
  if (sgn(value) != 0) coeffs_.push_back(value);
}

Scalar::Scalar(RingPtr ring, std::vector<Rational> residue)
    : ring_(std::move(ring)), coeffs_(std::move(residue)) {
  normalize();
}

Scalar Scalar::generator(RingPtr ring) {
  return Scalar(std::move(ring), {Rational(0), Rational(1)});
}

void Scalar::normalize() {
  if (ring_) {
    ring_->reduce(coeffs_);
  } else {
    trim(coeffs_);
    if (coeffs_.size() > 1) throw DomainError("residue of degree >= 1 requires a ring");
  }
}

RingPtr Scalar::common_ring(const Scalar& a, const Scalar& b) {
  if (!a.ring_) return b.ring_;
  if (!b.ring_) return a.ring_;
  if (a.ring_ == b.ring_ || *a.ring_ == *b.ring_) return a.ring_;
  throw RingMismatch("scalars from " + a.ring_->describe() + " and " + b.ring_->describe());
}

Rational Scalar::to_rational() const {
  if (!is_rational()) throw DomainError("scalar " + to_string() + " is not rational");
  return coeffs_.empty() ? Rational(0) : coeffs_[0];
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  ring_ = common_ring(*this, rhs);
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim(coeffs_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) { return *this += -rhs; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  ring_ = common_ring(*this, rhs);
  if (coeffs_.empty() || rhs.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> prod(coeffs_.size() + rhs.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(prod);
  normalize();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  if (is_rational()) return Scalar(Rational(1 / coeffs_[0]));
  // Solve (this * s) mod m == 1 as a linear system in the coefficients of s.
  const std::size_t n = ring_->degree();
  std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n + 1, Rational(0)));
  Scalar basis = Scalar(ring_, {Rational(1)});
  Scalar t = generator(ring_);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar column = *this * basis;
    for (std::size_t i = 0; i < column.coeffs_.size(); ++i) mat[i][j] = column.coeffs_[i];
    basis *= t;
  }
  mat[0][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(mat[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw DomainError(to_string() + " is a zero divisor in " + ring_->describe());
    std::swap(mat[pivot], mat[col]);
    Rational inv = 1 / mat[col][col];
    for (auto& v : mat[col]) v *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || sgn(mat[row][col]) == 0) continue;
      Rational factor = mat[row][col];
      for (std::size_t k = col; k <= n; ++k) mat[row][k] -= factor * mat[col][k];
    }
  }
  std::vector<Rational> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = mat[i][n];
  return Scalar(ring_, std::move(s));
}

Scalar Scalar::pow(unsigned long exponent) const {
  Scalar result(1);
  result.ring_ = ring_;
  Scalar base = *this;
  while (exponent > 0) {
    if (exponent & 1UL) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

bool operator==(const Scalar& lhs, const Scalar& rhs) {
  Scalar::common_ring(lhs, rhs);
  return lhs.coeffs_ == rhs.coeffs_;
}

std::string Scalar::to_string() const {
  if (coeffs_.empty()) return "0";
  if (coeffs_.size() == 1) return orbitlab::to_string(coeffs_[0]);
  std::string out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (sgn(coeffs_[i]) == 0) continue;
    out += term_string(coeffs_[i], i, ring_->variable(), first);
    first = false;
  }
  return "(" + out + ")";
}

}  // namespace orbitlab
