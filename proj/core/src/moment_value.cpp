#include "ldgram/moment_value.hpp"

#include <cmath>
#include <sstream>

#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

MomentValue combine(double value, double se, const MomentValue& a, const MomentValue& b) {
  const MomentValue& tag = a.is_exact() ? b : a;
  std::uint64_t samples = tag.samples();
  if (!a.is_exact() && !b.is_exact()) samples = std::min(a.samples(), b.samples());
  return MomentValue::monte_carlo(value, se, samples, tag.seed());
}

}  // namespace

MomentValue MomentValue::monte_carlo(double value, double std_error, std::uint64_t samples, std::uint64_t seed) {
  MomentValue m;
  m.method_ = MomentMethod::MonteCarlo;
  m.exact_ = 0;
  m.approx_ = value;
  m.std_error_ = std_error;
  m.samples_ = samples;
  m.seed_ = seed;
  return m;
}

const Rational& MomentValue::exact() const {
  if (!is_exact()) throw Error("moment is a Monte-Carlo estimate, not exact");
  return exact_;
}

double MomentValue::value() const { return is_exact() ? exact_.get_d() : approx_; }

std::string MomentValue::to_string() const {
  if (is_exact()) return exact_.get_str();
  std::ostringstream os;
  os.precision(17);
  os << approx_;
  return os.str();
}

MomentValue MomentValue::operator-() const {
  if (is_exact()) return MomentValue(Rational(-exact_));
  return monte_carlo(-approx_, std_error_, samples_, seed_);
}

MomentValue operator+(const MomentValue& a, const MomentValue& b) {
  if (a.is_exact() && b.is_exact()) return MomentValue(Rational(a.exact_ + b.exact_));
  return combine(a.value() + b.value(), std::hypot(a.std_error(), b.std_error()), a, b);
}

MomentValue operator-(const MomentValue& a, const MomentValue& b) { return a + (-b); }

MomentValue operator*(const MomentValue& a, const MomentValue& b) {
  if (a.is_exact() && b.is_exact()) return MomentValue(Rational(a.exact_ * b.exact_));
  double se = std::hypot(b.value() * a.std_error(), a.value() * b.std_error());
  return combine(a.value() * b.value(), se, a, b);
}

}  // namespace ldgram
