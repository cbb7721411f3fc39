#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "brute.hpp"
#include "ldgram/basis.hpp"
#include "ldgram/errors.hpp"
#include "ldgram/mc_oracle.hpp"

using namespace ldgram;

namespace {

ModelSpec hs_i(Rational lambda) {
  return ModelSpec::make(Family::HS, Sampling::Independent, 8, 3, Rational(1, 2), lambda);
}

// Sum over injective labelings of the product of component-recentered monomials.
double direct_centered(const Template& t, const ModelSpec& m, const Instance& inst) {
  brute::Oracle<double> oracle(m);
  auto comps = brute::edge_components(t);
  double total = 0;
  brute::for_each_labeling(t, m.n, [&](const std::vector<std::int64_t>& label) {
    double prod = 1;
    for (const auto& comp : comps) {
      brute::Monomial mono;
      double y = 1;
      for (int e : comp) {
        auto [a, b] = t.edges[e];
        mono[brute::ordered(label[a], label[b])] += 1;
        y *= inst.at(label[a] - 1, label[b] - 1);
      }
      prod *= y - oracle.null_moment(mono);
    }
    total += prod;
  });
  return total;
}

Instance permuted(const Instance& inst, const std::vector<int>& perm) {
  Instance out = inst;
  for (std::int64_t a = 0; a < inst.n; ++a) {
    for (std::int64_t b = 0; b < inst.n; ++b) out.y[perm[a] * inst.n + perm[b]] = inst.at(a, b);
  }
  return out;
}

}  // namespace

TEST(Sampler, DeterministicPerStream) {
  auto m = hs_i(Rational(1, 5));
  auto a = sample_instance(m, std::nullopt, 11, 4), b = sample_instance(m, std::nullopt, 11, 4);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(sample_instance(m, std::nullopt, 11, 5).y, a.y);
  EXPECT_TRUE(a.erased.empty());
}

TEST(Sampler, WellFormedAdjacency) {
  auto m = hs_i(Rational(1, 5));
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto inst = sample_instance(m, AlterationSpec::make(Rational(1, 2)), 2, s);
    EXPECT_EQ(inst.erased.size(), 8u);
    for (std::int64_t a = 0; a < 8; ++a) {
      EXPECT_EQ(inst.at(a, a), 0.0);
      EXPECT_GE(inst.z[a], 1);
      EXPECT_LE(inst.z[a], 8);
      for (std::int64_t b = a + 1; b < 8; ++b) {
        EXPECT_EQ(inst.at(a, b), inst.at(b, a));
        EXPECT_TRUE(inst.at(a, b) == 0.5 || inst.at(a, b) == -0.5);
      }
    }
  }
}

TEST(Sampler, PermutationPlantsExactlyK) {
  auto m = ModelSpec::make(Family::HS, Sampling::Permutation, 10, 4, Rational(1, 2), Rational(1, 5));
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto inst = sample_instance(m, std::nullopt, 9, s);
    EXPECT_EQ(std::count_if(inst.z.begin(), inst.z.end(), [](auto z) { return z <= 4; }), 4);
    auto sorted = inst.z;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> iota(10);
    std::iota(iota.begin(), iota.end(), 1);
    EXPECT_EQ(sorted, iota);
  }
}

TEST(Sampler, EdgeMeanMatchesModel) {
  // E[Y_12] = lambda (k/n)^2 under HS-I.
  auto m = hs_i(Rational(1, 2));
  const int draws = 40000;
  double sum = 0, sum2 = 0;
  for (int s = 0; s < draws; ++s) {
    double y = sample_instance(m, std::nullopt, 5, s).at(0, 1);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / draws, se = std::sqrt((sum2 / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, 0.5 * 9.0 / 64.0, 4 * se);
}

TEST(PsiEvaluator, MatchesDirectLabelingSum) {
  auto m = ModelSpec::make(Family::SBM, Sampling::Permutation, 6, 3, Rational(1, 3), Rational(1, 4));
  for (bool rooted : {false, true}) {
    for (const auto& t : rooted ? enumerate_rooted_templates(2) : enumerate_templates(3)) {
      PsiEvaluator psi(t, m);
      for (std::uint64_t s = 0; s < 3; ++s) {
        auto inst = sample_instance(m, std::nullopt, 1, s);
        const double want = direct_centered(t, m, inst);
        EXPECT_NEAR(psi.centered(inst), want, 1e-9) << t.to_string();
        EXPECT_NEAR(psi(inst), want / std::sqrt(variance_proxy(t, m).get_d()), 1e-9);
        EXPECT_NEAR(evaluate_psi(t, inst, m), psi(inst), 1e-12);
      }
    }
  }
}

TEST(PsiEvaluator, InvariantUnderNodeRelabeling) {
  auto m = hs_i(Rational(1, 5));
  auto inst = sample_instance(m, std::nullopt, 3, 0);
  std::vector<int> perm{3, 7, 0, 5, 1, 6, 2, 4};
  auto other = permuted(inst, perm);
  for (const auto& t : enumerate_templates(3)) {
    PsiEvaluator psi(t, m);
    EXPECT_NEAR(psi(inst), psi(other), 1e-9) << t.to_string();
    EXPECT_NEAR(psi.raw(inst), psi.raw(other), 1e-9);
  }
}

TEST(PsiEvaluator, RejectsOversizedInputs) {
  auto big = ModelSpec::make(Family::HS, Sampling::Independent, 40, 3, Rational(1, 2), Rational(1, 5));
  EXPECT_THROW(estimate_gram(1, big, false, McOptions{10, 1, 1}), CapExceeded);
}

TEST(EstimateGram, NullIsNearIdentity) {
  auto m = hs_i(0);
  auto g = estimate_gram(2, m, false, McOptions{20000, 7, 0});
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.at(0, 0).value(), 1.0);
  EXPECT_EQ(g.at(0, 0).std_error(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == 0 && j == 0) continue;
      EXPECT_NEAR(g.at(i, j).value(), i == j ? 1.0 : 0.0, 4 * g.at(i, j).std_error()) << i << "," << j;
    }
  }
}

TEST(EstimateGram, ReproducibleAcrossThreadCounts) {
  auto m = hs_i(Rational(1, 5));
  auto a = estimate_gram(2, m, true, McOptions{5000, 3, 1});
  auto b = estimate_gram(2, m, true, McOptions{5000, 3, 3});
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].value(), b.entries[i].value());
    EXPECT_EQ(a.entries[i].std_error(), b.entries[i].std_error());
  }
  auto c = estimate_gram(2, m, true, McOptions{5000, 4, 1});
  EXPECT_NE(a.entries[5].value(), c.entries[5].value());
}

TEST(EstimateGram, StandardErrorShrinksWithSamples) {
  auto m = hs_i(Rational(1, 5));
  auto small = estimate_gram(1, m, false, McOptions{4000, 1, 0});
  auto large = estimate_gram(1, m, false, McOptions{16000, 1, 0});
  const double ratio = large.at(1, 1).std_error() / small.at(1, 1).std_error();
  EXPECT_GT(ratio, 0.4);
  EXPECT_LT(ratio, 0.6);
}

TEST(CrossValidate, AgreesAtSmallScale) {
  auto m = hs_i(Rational(1, 5));
  auto rows = cross_validate(2, m, AlterationSpec::make(Rational(1, 2)), McOptions{20000, 2, 0});
  std::set<std::string> kinds;
  for (const auto& c : rows) {
    kinds.insert(c.quantity);
    EXPECT_LE(std::abs(c.z()), 4.5) << c.quantity << " " << c.row << "," << c.col;
  }
  EXPECT_EQ(kinds, (std::set<std::string>{"gram", "gram_rooted", "h1_mean", "x_corr"}));
}

TEST(Comparison, ZScore) {
  Comparison c;
  c.analytic = 1;
  c.empirical = 1;
  EXPECT_EQ(c.z(), 0.0);
  c.empirical = 1.5;
  EXPECT_TRUE(std::isinf(c.z()));
  c.std_error = 0.3;
  c.analytic_std_error = 0.4;
  EXPECT_NEAR(c.z(), 1.0, 1e-15);
}
