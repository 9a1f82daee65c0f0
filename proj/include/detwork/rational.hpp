#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace detwork {

using BigInt = mpz_class;

/// Exact rational number. Values produced by this library are always
/// canonical (lowest terms, positive denominator).
using Rational = mpq_class;

/// Parses "3", "-0.25", "1.5e-3" or "2/3" into an exact rational.
/// Throws InvalidArgument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

/// Correctly rounded decimal with `significant` significant digits
/// (round half away from zero), trailing zeros removed.
std::string to_decimal(const Rational& value, int significant = 20);

/// Same formatting applied to the exact binary value of a double.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string to_decimal(double value, int significant = 20);

double to_double(const Rational& value);

/// Exact conversion of a finite double.
Rational from_double(double value);

/// Largest rational g with a/g and b/g both integers; gcd(0, x) = |x|.
Rational rational_gcd(const Rational& a, const Rational& b);

BigInt floor_of(const Rational& value);

BigInt binomial(unsigned long n, unsigned long k);

/// Narrowing conversion; throws ResourceLimitExceeded when out of range.
std::int64_t to_int64(const BigInt& value, std::string_view what);

}  // namespace detwork
