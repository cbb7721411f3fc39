#include <benchmark/benchmark.h>

#include "ldgram/analysis.hpp"
#include "ldgram/matchings.hpp"
#include "ldgram/mc_oracle.hpp"

using namespace ldgram;

namespace {

ModelSpec large_hs() {
  return ModelSpec::make(Family::HS, Sampling::Independent, 1'000'000, 251, Rational(1, 2),
                         Rational(88036202, 1000000000));
}

void BM_Canonicalize(benchmark::State& state) {
  const std::vector<Edge> edges{{4, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 5}};
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(6, edges));
}
BENCHMARK(BM_Canonicalize);

void BM_EnumerateTemplates(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_templates(D));
}
BENCHMARK(BM_EnumerateTemplates)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_MatchingOrbits(benchmark::State& state) {
  const auto ts = enumerate_templates(3);
  for (auto _ : state) {
    for (const auto& a : ts) {
      for (const auto& b : ts) benchmark::DoNotOptimize(matching_orbits(a, b));
    }
  }
}
BENCHMARK(BM_MatchingOrbits)->Unit(benchmark::kMillisecond);

void BM_GramMatrixLargeN(benchmark::State& state) {
  const ModelSpec m = large_hs();
  GramOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(static_cast<int>(state.range(0)), m, false, opts));
}
BENCHMARK(BM_GramMatrixLargeN)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_Advantage(benchmark::State& state) {
  const ModelSpec m = large_hs();
  const auto alt = AlterationSpec::make(Rational(99, 100));
  for (auto _ : state) benchmark::DoNotOptimize(advantage(2, m, alt));
}
BENCHMARK(BM_Advantage)->Unit(benchmark::kMillisecond);

void BM_PsiEvaluation(benchmark::State& state) {
  const auto m = ModelSpec::make(Family::SBM, Sampling::Permutation, 12, 3, Rational(1, 2), Rational(1, 5));
  const auto t = canonicalize(4, {{0, 1}, {1, 2}, {2, 3}});
  const PsiEvaluator psi(t, m);
  const Instance inst = sample_instance(m, std::nullopt, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(psi(inst));
}
BENCHMARK(BM_PsiEvaluation);

}  // namespace

BENCHMARK_MAIN();
