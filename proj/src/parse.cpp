#include "orbitlab/parse.hpp"

#include <cctype>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

constexpr unsigned long kMaxExponent = 1UL << 20;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  RatPoly run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    RatPoly p = expression();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return p;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() {
    ++pos_;
    skip_space();
  }
  bool starts_primary() const {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'X' || c == 'x' || c == '(';
  }

  RatPoly expression() {
    RatPoly acc = term();
    while (peek() == '+' || peek() == '-') {
      char op = peek();
      advance();
      RatPoly rhs = term();
      if (op == '+') acc += rhs; else acc -= rhs;
    }
    return acc;
  }

  RatPoly term() {
    RatPoly acc = unary();
    for (;;) {
      if (peek() == '*') {
        advance();
        acc *= unary();
      } else if (peek() == '/') {
        advance();
        std::size_t at = pos_;
        RatPoly d = unary();
        if (d.degree() > 0) throw ParseError("division by a non-constant", at);
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc *= Rational(1 / d.leading());
      } else if (starts_primary()) {
        acc *= power();
      } else {
        return acc;
      }
    }
  }

  RatPoly unary() {
    if (peek() == '-') {
      advance();
      return -unary();
    }
    if (peek() == '+') {
      advance();
      return unary();
    }
    return power();
  }

  RatPoly power() {
    RatPoly base = primary();
    if (peek() != '^') return base;
    advance();
    return pow(base, exponent());
  }

  // Right-associative chain of integer literals: X^2^3 = X^8.
  unsigned long exponent() {
    std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("exponent must be a nonnegative integer literal", at);
    }
    Integer e = integer_literal();
    if (peek() == '^') {
      advance();
      unsigned long inner = exponent();
      Integer r;
      if (e > 1 && inner > 64) throw ParseError("exponent too large", at);
      mpz_pow_ui(r.get_mpz_t(), e.get_mpz_t(), inner);
      e = r;
    }
    if (e > kMaxExponent) throw ParseError("exponent too large", at);
    return e.get_ui();
  }

  Integer integer_literal() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    Integer v(text_.substr(start, pos_ - start), 10);
    skip_space();
    return v;
  }

  RatPoly primary() {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return RatPoly::constant(Rational(integer_literal()));
    if (c == 'X' || c == 'x') {
      advance();
      return RatPoly::x();
    }
    if (c == '(') {
      std::size_t open = pos_;
      advance();
      RatPoly inner = expression();
      if (peek() != ')') throw ParseError("unbalanced '(' opened at " + std::to_string(open), pos_);
      advance();
      return inner;
    }
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

RatPoly parse_poly(const std::string& text) { return Parser(text).run(); }

}  // namespace orbitlab
