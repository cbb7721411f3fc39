#include "ldgram/rational.hpp"

#include <cctype>

#include "ldgram/errors.hpp"

namespace ldgram {

BigInt falling_factorial(std::int64_t n, std::int64_t k) {
  if (k < 0) throw ValidationError("falling_factorial: negative k");
  if (k > n) return 0;
  BigInt out = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    out *= BigInt(std::to_string(n - i));
  }
  return out;
}

Rational rational_pow(const Rational& base, unsigned exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  bool negative = false;
  std::string body = text;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational out;
  auto slash = body.find('/');
  auto dot = body.find('.');
  if (slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ValidationError("not a rational: '" + raw + "'");
    BigInt d(den, 10);
    if (d == 0) throw ValidationError("zero denominator: '" + raw + "'");
    out = Rational(BigInt(num, 10), d);
  } else if (dot != std::string::npos) {
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (frac.empty() || !all_digits(whole) || !all_digits(frac)) {
      throw ValidationError("not a decimal: '" + raw + "'");
    }
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    out = Rational(BigInt(whole + frac, 10), den);
  } else {
    if (!all_digits(body)) throw ValidationError("not a number: '" + raw + "'");
    out = Rational(BigInt(body));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace ldgram
