#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

#include <limits>

#include "ldgram/rational.hpp"

namespace ldgram {

// 50 decimal digits (166-bit significand).
using HighFloat = boost::multiprecision::cpp_bin_float_50;

HighFloat to_high(const Rational& value);

}  // namespace ldgram

namespace Eigen {

template <>
struct NumTraits<ldgram::HighFloat> : GenericNumTraits<ldgram::HighFloat> {
  using Self = ldgram::HighFloat;
  using Real = Self;
  using NonInteger = Self;
  using Literal = Self;
  using Nested = Self;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 32
  };
  static Real epsilon() { return std::numeric_limits<Self>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1024; }
  static Real highest() { return (std::numeric_limits<Self>::max)(); }
  static Real lowest() { return (std::numeric_limits<Self>::lowest)(); }
  static Real infinity() { return std::numeric_limits<Self>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Self>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Self>::digits10; }
};

}  // namespace Eigen

namespace ldgram {

using HighMatrix = Eigen::Matrix<HighFloat, Eigen::Dynamic, Eigen::Dynamic>;
using HighVector = Eigen::Matrix<HighFloat, Eigen::Dynamic, 1>;

}  // namespace ldgram
