#pragma once

#include <cstdint>
#include <vector>

#include "ldgram/graph.hpp"
#include "ldgram/high_precision.hpp"
#include "ldgram/model.hpp"
#include "ldgram/moment_value.hpp"
#include "ldgram/moments.hpp"

namespace ldgram {

Rational variance_proxy(const Template& t, const ModelSpec& model);

struct BasisElement {
  Template shape;
  Rational variance;

  static BasisElement make(const Template& t, const ModelSpec& model);
};

struct GramOptions {
  MomentOptions moments;
  // Under independent sampling, matchings outside M* contribute 0; skip them.
  bool skip_non_star = true;
  int threads = 0;
};

// E[Psi_1 Psi_2] = scalar / sqrt(norm_1 norm_2), where scalar sums
// labeling_count * E[Pbar Pbar] over matchings.
struct GramEntry {
  MomentValue scalar;
  MomentValue perfect_scalar;  // contribution of perfect matchings alone
  Rational norm_1{1};
  Rational norm_2{1};

  HighFloat high_value() const;
  double value() const;
  double std_error() const;
};

GramEntry gram_entry(const Template& g1, const Template& g2, const ModelSpec& model,
                     const GramOptions& opts = {});

// E[Psi_g] as a GramEntry with norm_1 = 1.
GramEntry border_entry(const Template& g, const ModelSpec& model, const GramOptions& opts = {});

struct GramMatrix {
  ModelSpec model;
  int D = 0;
  bool rooted = false;
  std::vector<Template> templates;
  std::vector<Rational> variance;       // index 0 is the constant, with variance 1
  std::vector<MomentValue> scalars;     // row-major (N+1)^2, unnormalized

  std::size_t size() const { return variance.size(); }
  const MomentValue& scalar(std::size_t i, std::size_t j) const { return scalars[i * size() + j]; }
  bool exact() const;
  HighFloat entry(std::size_t i, std::size_t j) const;
  double std_error(std::size_t i, std::size_t j) const;
  HighMatrix normalized() const;
};

GramMatrix gram_matrix(int D, const ModelSpec& model, bool rooted, const GramOptions& opts = {},
                       const EnumerationCaps& caps = {});

// Entry 0 is the constant 1; entry G is E_{H1}[Psi_G] for each template.
std::vector<GramEntry> altered_means(const std::vector<Template>& templates, const ModelSpec& model,
                                     const AlterationSpec& alt, const GramOptions& opts = {});

// Entry 0 is E[x]; entry G is E[x Psi^{(1,2)}_G] for each rooted template.
std::vector<GramEntry> x_correlation_vector(const std::vector<Template>& templates, const ModelSpec& model,
                                            const GramOptions& opts = {});

}  // namespace ldgram
