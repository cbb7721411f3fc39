#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ldgram/rational.hpp"

namespace ldgram {

enum class MomentMethod { Exact, MonteCarlo };

// An exact rational, or a Monte-Carlo estimate tagged with its standard error,
// sample count and seed.
class MomentValue {
 public:
  MomentValue() : exact_(0) {}
  MomentValue(Rational v) : exact_(std::move(v)) {}  // NOLINT(implicit)
  static MomentValue monte_carlo(double value, double std_error, std::uint64_t samples,
                                 std::uint64_t seed);

  bool is_exact() const { return method_ == MomentMethod::Exact; }
  MomentMethod method() const { return method_; }
  const Rational& exact() const;  // throws if Monte-Carlo
  double value() const;
  double std_error() const { return std_error_; }
  std::uint64_t samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }

  std::string to_string() const;

  MomentValue operator-() const;
  friend MomentValue operator+(const MomentValue& a, const MomentValue& b);
  friend MomentValue operator-(const MomentValue& a, const MomentValue& b);
  friend MomentValue operator*(const MomentValue& a, const MomentValue& b);
  MomentValue& operator+=(const MomentValue& b) { return *this = *this + b; }
  MomentValue& operator*=(const MomentValue& b) { return *this = *this * b; }

 private:
  MomentMethod method_ = MomentMethod::Exact;
  Rational exact_;
  double approx_ = 0.0;
  double std_error_ = 0.0;
  std::uint64_t samples_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace ldgram
