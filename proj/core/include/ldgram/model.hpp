#pragma once

#include <cstdint>
#include <string>

#include "ldgram/rational.hpp"

namespace ldgram {

enum class Family { HS, SBM, TS };
enum class Sampling { Independent, Permutation };

std::string to_string(Family f);
std::string to_string(Sampling s);
Family parse_family(const std::string& text);
Sampling parse_sampling(const std::string& text);

struct ModelSpec {
  Family family = Family::HS;
  Sampling sampling = Sampling::Independent;
  std::int64_t n = 0;
  std::int64_t k = 0;
  Rational q{1, 2};
  Rational lambda{0};

  // Throws ValidationError naming the violated invariant.
  static ModelSpec make(Family family, Sampling sampling, std::int64_t n, std::int64_t k,
                        Rational q, Rational lambda);
  void validate() const;

  Rational qbar() const { return q * (1 - q); }
  Rational p() const { return lambda + q; }
  Rational pbar() const { return qbar() + lambda * (1 - 2 * q); }
  std::int64_t groups() const { return n / k; }

  // Whether theta(a, b) is nonzero when lambda > 0; a == b is allowed.
  bool active(std::int64_t a, std::int64_t b) const;
  // Whether label a lies in the erased set selected by lhat (lhat ignored for HS).
  bool in_altered_set(std::int64_t lhat, std::int64_t a) const;
  // Number of values lhat ranges over (1 for HS).
  std::int64_t lhat_range() const;

  std::string describe() const;
};

Rational theta(const ModelSpec& model, std::int64_t a, std::int64_t b);

struct AlterationSpec {
  Rational epsilon{1, 2};

  static AlterationSpec make(Rational epsilon);
  void validate() const;
};

}  // namespace ldgram
