#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldgram/basis.hpp"
#include "ldgram/high_precision.hpp"

namespace ldgram {

struct Deviation {
  double exact_eig = 0.0;  // max |eigenvalue of Gamma - I|
  double l1_bound = 0.0;   // max row sum of |Gamma - I|
};

Deviation operator_norm_deviation(const HighMatrix& gamma);
Deviation operator_norm_deviation(const GramMatrix& gram);
std::vector<HighFloat> eigenvalues(const HighMatrix& gamma);

struct LDReport {
  int D = 0;
  double op_norm_deviation = 0.0;
  double l1_row_bound = 0.0;
  double adv_exact = 0.0;
  double adv_orthonormal_bound = 0.0;
  double corr_exact = 0.0;
  double corr_orthonormal_approx = 0.0;
  std::vector<double> optimal_coefficients;
  std::vector<std::string> templates;
  HighFloat adv_squared = 0;
  HighFloat corr_squared = 0;
};

// sqrt(m^T Gamma^{-1} m); throws SingularGram when the deviation is >= 1.
LDReport advantage_from(const GramMatrix& gram, const std::vector<GramEntry>& altered);
LDReport correlation_from(const GramMatrix& rooted_gram, const std::vector<GramEntry>& xvec);

// Without an alteration H1 = H0 and the means are the border entries E[Psi_G].
LDReport advantage(int D, const ModelSpec& model, const std::optional<AlterationSpec>& alt,
                   const GramOptions& opts = {});
LDReport correlation(int D, const ModelSpec& model, const GramOptions& opts = {});

struct ConditionConstants {
  Rational c_s{1};
  Rational c_m{0};
  Rational c_v1{0};
  Rational c_v2{1};
  Rational c_v3{0};
  Rational c_v4{1};
  Rational c_vd1{2};
  Rational c_vd2{8};

  void validate() const;
  // Constants proved for each of the six models.
  static ConditionConstants defaults_for(Family family, Sampling sampling);
};

enum class Condition { Signal, Moment, Variance, VariancePermutation };
std::string to_string(Condition c);
Condition parse_condition(const std::string& text);

struct ConditionReport {
  Condition which = Condition::Signal;
  bool holds = true;
  double worst_ratio = 0.0;
  std::string witness;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  // Variance only: largest |E[P^2] - qbar^{|E|}| over templates, exact.
  std::optional<Rational> second_moment_deviation;
};

struct ConditionOptions {
  MomentOptions moments;
  int threads = 0;
  std::int64_t permutation_max_n = 12;
  int permutation_max_nodes = 6;
};

ConditionReport check_condition(const ModelSpec& model, int D, Condition which, const ConditionConstants& consts,
                                const ConditionOptions& opts = {});

}  // namespace ldgram
