#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldgram/basis.hpp"
#include "ldgram/graph.hpp"
#include "ldgram/model.hpp"
#include "ldgram/moment_value.hpp"

namespace ldgram {

// One draw of the model. Labels and vertices are 1-based in z; Y is stored densely.
struct Instance {
  std::int64_t n = 0;
  std::vector<std::int64_t> z;    // z[i] for node i+1
  std::vector<double> y;          // n*n, symmetric, zero diagonal; values 1-q or -q
  std::vector<bool> erased;       // empty under H0

  double at(std::int64_t i, std::int64_t j) const { return y[static_cast<std::size_t>(i * n + j)]; }
};

inline constexpr std::int64_t kMaxOracleN = 12;
inline constexpr int kMaxOracleVertices = 6;

// Deterministic in (seed, stream).
Instance sample_instance(const ModelSpec& model, const std::optional<AlterationSpec>& alt, std::uint64_t seed,
                         std::uint64_t stream);

// Evaluates Psi_G (or Psi^{(1,2)}_G for rooted templates) by injection sums.
class PsiEvaluator {
 public:
  PsiEvaluator(const Template& t, const ModelSpec& model);
  double operator()(const Instance& inst) const;
  // Unnormalized Pbar_G.
  double centered(const Instance& inst) const;
  // P_G itself, no centering.
  double raw(const Instance& inst) const;

 private:
  struct Term {
    double coefficient;
    std::vector<Edge> edges;
    std::vector<int> free_vertices;
  };
  Template shape_;
  std::int64_t n_;
  double scale_;
  std::vector<Term> terms_;
};

double evaluate_psi(const Template& t, const Instance& inst, const ModelSpec& model);

struct McGram {
  std::vector<Template> templates;
  std::vector<MomentValue> entries;  // (N+1)^2 row-major, index 0 is the constant
  std::size_t size() const { return templates.size() + 1; }
  const MomentValue& at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
};

struct McOptions {
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 1;
  int threads = 0;
};

McGram estimate_gram(int D, const ModelSpec& model, bool rooted, const McOptions& opts);
std::vector<MomentValue> estimate_h1_means(int D, const ModelSpec& model, const AlterationSpec& alt,
                                           const McOptions& opts);
std::vector<MomentValue> estimate_corr_vector(int D, const ModelSpec& model, const McOptions& opts);

// One analytic quantity next to its empirical estimate.
struct Comparison {
  std::string quantity;  // gram, h1_mean, gram_rooted, x_corr
  std::size_t row = 0;
  std::size_t col = 0;
  double analytic = 0.0;
  double analytic_std_error = 0.0;  // nonzero only if the analytic side fell back to sampling
  double empirical = 0.0;
  double std_error = 0.0;

  // (empirical - analytic) / combined standard error; 0 when both agree exactly.
  double z() const;
};

// Gram (unrooted and rooted), H1 means and x-correlations at degree D.
std::vector<Comparison> cross_validate(int D, const ModelSpec& model, const AlterationSpec& alt,
                                       const McOptions& mc, const GramOptions& gram = {});

}  // namespace ldgram
