#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace blackwell {

/// Exact rational scalar. Values are kept canonical (lowest terms, positive
/// denominator) by GMP; every entry point that constructs one from raw parts
/// canonicalizes explicitly.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Builds num/den in canonical form. Throws std::invalid_argument on den == 0.
Rational rational(long num, long den = 1);

/// Parses "p", "+p", "-p" or "p/q" with decimal digits only. Decimal points,
/// exponents, spaces and a signed denominator are all rejected; so is q == 0.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, else "p/q".
/// parse_rational(to_string(r)) == r for every value.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

int sign_of(const Rational& value);

Rational abs_of(const Rational& value);

/// Exact value^exponent (exponent >= 0).
Rational pow_of(const Rational& value, unsigned long exponent);

}  // namespace blackwell
