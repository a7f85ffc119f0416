#include "blackwell/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace blackwell {

Rational rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  const std::size_t num_begin = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == num_begin) return std::nullopt;
  const std::string numerator{text.substr(num_begin, i - num_begin)};

  std::string denominator = "1";
  if (i < text.size()) {
    if (text[i] != '/') return std::nullopt;
    ++i;
    const std::size_t den_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin || i != text.size()) return std::nullopt;
    denominator = std::string{text.substr(den_begin)};
  }

  BigInt num(numerator);
  BigInt den(denominator);
  if (den == 0) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

int sign_of(const Rational& value) { return sgn(value); }

Rational abs_of(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Rational pow_of(const Rational& value, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), value.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), value.get_den().get_mpz_t(), exponent);
  return Rational(num, den);  // already canonical: powers of coprime parts stay coprime
}

}  // namespace blackwell
