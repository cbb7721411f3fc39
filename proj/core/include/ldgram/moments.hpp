#pragma once

#include <cstdint>

#include "ldgram/graph.hpp"
#include "ldgram/model.hpp"
#include "ldgram/moment_value.hpp"

namespace ldgram {

struct MomentOptions {
  std::uint64_t budget = 100'000'000;  // largest exact latent state space
  bool allow_monte_carlo = true;
  std::uint64_t mc_samples = 200'000;
  std::uint64_t seed = 20240611;
};

// E[P_{G,pi}].
MomentValue raw_moment(const ModelSpec& model, const LabeledGraph& g, const MomentOptions& opts = {});

// E[P_{g1} P_{g2}]; edges shared by both labeled graphs have multiplicity 2.
MomentValue raw_product_moment(const ModelSpec& model, const LabeledGraph& g1, const LabeledGraph& g2,
                               const MomentOptions& opts = {});

// E[Pbar_{g1} Pbar_{g2}], centering each connected component by its H0 mean.
MomentValue centered_product_moment(const ModelSpec& model, const LabeledGraph& g1,
                                    const LabeledGraph& g2, const MomentOptions& opts = {});
// E[Pbar_g].
MomentValue centered_moment(const ModelSpec& model, const LabeledGraph& g, const MomentOptions& opts = {});

// E_{H1}[Pbar_g], centering constants taken under H0.
MomentValue altered_centered_mean(const ModelSpec& model, const AlterationSpec& alt, const LabeledGraph& g,
                                  const MomentOptions& opts = {});

// E[x] with x = 1{theta(z_1, z_2) != 0}.
MomentValue x_mean(const ModelSpec& model, const MomentOptions& opts = {});

// E[x Pbar^{(1,2)}_g] for a rooted labeled graph (roots on labels 1 and 2).
MomentValue x_weighted_centered_moment(const ModelSpec& model, const LabeledGraph& g,
                                       const MomentOptions& opts = {});

}  // namespace ldgram
