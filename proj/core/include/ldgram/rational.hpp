#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ldgram {

using Rational = mpq_class;
using BigInt = mpz_class;

// n (n-1) ... (n-k+1); 1 when k == 0, 0 when k > n >= 0.
BigInt falling_factorial(std::int64_t n, std::int64_t k);

Rational rational_pow(const Rational& base, unsigned exponent);

// Accepts "p/q", integers and plain decimals ("0.125", "-3.5e-2" is rejected).
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& value);
double to_double(const Rational& value);

}  // namespace ldgram
