#pragma once

#include <map>
#include <vector>

#include "ldgram/graph.hpp"
#include "ldgram/model.hpp"
#include "ldgram/moment_value.hpp"
#include "ldgram/moments.hpp"

namespace ldgram::detail {

// Conditional on the latent labels, a product of monomials factorizes into one
// factor per node pair (value depends on whether the pair is active) and, under
// an alteration, one factor per node (value depends on membership in the erased set).
struct PairFactor {
  int a = 0;
  int b = 0;
  Rational off;
  Rational on;
};

struct VertexFactor {
  int v = 0;
  Rational outside;
  Rational inside;
};

struct FactorGraph {
  int vertex_count = 0;
  std::vector<PairFactor> pairs;
  std::vector<VertexFactor> vertices;
  Rational scale{1};
};

// Multiplicity 1 contributes E[Y|z] = theta; multiplicity 2 contributes
// E[Y^2|z] = qbar + theta (1 - 2q).
FactorGraph monomial_factors(const ModelSpec& model, int vertex_count, const std::map<Edge, int>& multiplicity);

// Expectation over the latent labels (and lhat when vertex factors are present).
MomentValue expect(const ModelSpec& model, const FactorGraph& graph, const MomentOptions& opts);

}  // namespace ldgram::detail
