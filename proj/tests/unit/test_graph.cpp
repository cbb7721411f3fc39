#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "brute.hpp"
#include "ldgram/errors.hpp"
#include "ldgram/graph.hpp"

using namespace ldgram;

namespace {

Template relabeled(const Template& t, const std::vector<int>& perm) {
  std::vector<Edge> edges;
  for (auto [a, b] : t.edges) edges.emplace_back(perm[b], perm[a]);
  std::optional<Edge> roots;
  if (t.roots) roots = Edge{perm[t.roots->first], perm[t.roots->second]};
  return canonicalize(t.vertex_count, edges, roots);
}

std::uint64_t factorial(int v) {
  std::uint64_t f = 1;
  for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

}  // namespace

TEST(Canonicalize, PathInTwoLabelings) {
  auto a = canonicalize(3, {{0, 1}, {1, 2}});
  auto b = canonicalize(3, {{2, 1}, {0, 2}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.edge_count(), 2);
}

TEST(Canonicalize, SingleEdge) {
  auto t = canonicalize(2, {{1, 0}});
  EXPECT_EQ(t.vertex_count, 2);
  EXPECT_EQ(t.edges, (std::vector<Edge>{{0, 1}}));
}

TEST(Canonicalize, RejectsMalformedGraphs) {
  EXPECT_THROW(canonicalize(3, {{0, 1}}), ValidationError);
  EXPECT_THROW(canonicalize(2, {{0, 0}}), ValidationError);
  EXPECT_THROW(canonicalize(2, {{0, 1}, {1, 0}}), ValidationError);
  EXPECT_THROW(canonicalize(2, {{0, 2}}), ValidationError);
  EXPECT_NO_THROW(canonicalize(3, {{1, 2}}, Edge{0, 1}));
  EXPECT_THROW(canonicalize(4, {{1, 2}}, Edge{0, 1}), ValidationError);
}

TEST(Canonicalize, VertexCap) {
  std::vector<Edge> edges;
  for (int i = 0; i < 7; ++i) edges.emplace_back(2 * i, 2 * i + 1);
  EXPECT_THROW(canonicalize(14, edges), CapExceeded);
  EXPECT_NO_THROW(canonicalize(14, edges, std::nullopt, 14));
}

TEST(Canonicalize, InvariantUnderEveryRelabeling) {
  for (bool rooted : {false, true}) {
    auto list = rooted ? enumerate_rooted_templates(3) : enumerate_templates(3);
    std::mt19937 rng(7);
    for (const auto& t : list) {
      std::vector<int> perm(t.vertex_count);
      std::iota(perm.begin(), perm.end(), 0);
      for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(relabeled(t, perm), t) << t.to_string();
      }
      EXPECT_EQ(canonicalize(t.vertex_count, t.edges, t.roots), t);
    }
  }
}

TEST(Automorphisms, SmallExamples) {
  EXPECT_EQ(automorphism_count(canonicalize(2, {{0, 1}})), 2u);
  EXPECT_EQ(automorphism_count(canonicalize(3, {{0, 1}, {1, 2}, {0, 2}})), 6u);
  EXPECT_EQ(automorphism_count(canonicalize(4, {{0, 1}, {2, 3}})), 8u);
}

TEST(Automorphisms, AgreeWithPermutationSearch) {
  for (bool rooted : {false, true}) {
    for (const auto& t : rooted ? enumerate_rooted_templates(3) : enumerate_templates(3)) {
      const auto count = automorphism_count(t);
      EXPECT_EQ(count, brute::brute_automorphisms(t)) << t.to_string();
      EXPECT_EQ(factorial(t.vertex_count) % count, 0u);
      for (const auto& p : automorphisms(t)) EXPECT_EQ(relabeled(t, p), t);
    }
  }
}

TEST(Automorphisms, IsolatedRootsReduceToUnrooted) {
  for (const auto& t : enumerate_rooted_templates(3)) {
    bool isolated = true;
    for (auto [a, b] : t.edges) isolated = isolated && a > 1 && b > 1;
    if (!isolated) continue;
    std::vector<Edge> shifted;
    for (auto [a, b] : t.edges) shifted.emplace_back(a - 2, b - 2);
    EXPECT_EQ(automorphism_count(t), automorphism_count(canonicalize(t.vertex_count - 2, shifted)));
  }
}

TEST(Enumeration, CountsMatchIndependentEnumeration) {
  // Counts and (edges, vertices, |Aut|) profiles from a separate
  // isomorphism-class enumeration.
  EXPECT_EQ(enumerate_templates(1).size(), 1u);
  EXPECT_EQ(enumerate_templates(2).size(), 3u);
  EXPECT_EQ(enumerate_templates(3).size(), 8u);
  EXPECT_EQ(enumerate_templates(4).size(), 19u);
  EXPECT_EQ(enumerate_rooted_templates(1).size(), 4u);
  EXPECT_EQ(enumerate_rooted_templates(2).size(), 17u);
  EXPECT_EQ(enumerate_rooted_templates(3).size(), 60u);

  std::multiset<std::tuple<int, int, std::uint64_t>> got, want{
      {1, 2, 2}, {2, 3, 2}, {2, 4, 8}, {3, 3, 6}, {3, 4, 2}, {3, 4, 6}, {3, 5, 4}, {3, 6, 48},
      {4, 4, 2}, {4, 4, 8}, {4, 5, 2}, {4, 5, 2}, {4, 5, 12}, {4, 5, 24}, {4, 6, 4}, {4, 6, 8},
      {4, 6, 12}, {4, 7, 16}, {4, 8, 384}};
  for (const auto& t : enumerate_templates(4)) got.insert({t.edge_count(), t.vertex_count, automorphism_count(t)});
  EXPECT_EQ(got, want);
}

TEST(Enumeration, OrderedAndNested) {
  for (int D = 1; D <= 3; ++D) {
    auto small = enumerate_templates(D), big = enumerate_templates(D + 1);
    EXPECT_TRUE(std::is_sorted(small.begin(), small.end(), template_less));
    for (const auto& t : small) EXPECT_NE(std::find(big.begin(), big.end(), t), big.end());
  }
}

TEST(Enumeration, RootedDegreeOne) {
  std::set<std::string> got;
  for (const auto& t : enumerate_rooted_templates(1)) got.insert(t.to_string());
  std::set<std::string> want{"v=2;roots=0,1;edges=(0,1)", "v=3;roots=0,1;edges=(0,2)",
                             "v=3;roots=0,1;edges=(1,2)", "v=4;roots=0,1;edges=(2,3)"};
  EXPECT_EQ(got, want);
  auto two = enumerate_rooted_templates(2);
  EXPECT_NE(std::find(two.begin(), two.end(), canonicalize(3, {{0, 2}, {2, 1}}, Edge{0, 1})), two.end());
}

TEST(Enumeration, DegreeCap) {
  EXPECT_THROW(enumerate_templates(6), CapExceeded);
  EXPECT_THROW(enumerate_templates(3, EnumerationCaps{2, false}), CapExceeded);
}

TEST(Serialization, RoundTrip) {
  for (bool rooted : {false, true}) {
    for (const auto& t : rooted ? enumerate_rooted_templates(3) : enumerate_templates(3)) {
      EXPECT_EQ(Template::parse(t.to_string()), t);
    }
  }
  EXPECT_EQ(canonicalize(3, {{0, 1}, {1, 2}}).to_string(), "v=3;roots=none;edges=(0,1)(0,2)");
  EXPECT_THROW(Template::parse("v=2;edges=(0,1)"), ValidationError);
  EXPECT_THROW(Template::parse("v=2;roots=none;edges=(0,1"), ValidationError);
  EXPECT_EQ(Template::parse("v=3;roots=none;edges=(1,0)(1,2)").to_string(), "v=3;roots=none;edges=(0,1)(0,2)");
  EXPECT_THROW(Template::parse("v=3;roots=none;edges=(0,1)"), ValidationError);
}

TEST(Components, Examples) {
  EXPECT_EQ(connected_components(canonicalize(3, {{0, 1}, {1, 2}, {0, 2}})).size(), 1u);
  EXPECT_EQ(connected_components(canonicalize(4, {{0, 1}, {2, 3}})).size(), 2u);
  auto rooted = canonicalize(4, {{1, 2}, {2, 3}}, Edge{0, 1});
  EXPECT_EQ(connected_components(rooted).size(), 2u);
  auto nontrivial = nontrivial_components(rooted);
  ASSERT_EQ(nontrivial.size(), 1u);
  EXPECT_EQ(std::count(nontrivial[0].begin(), nontrivial[0].end(), 0), 0);
}

TEST(EditDistance, Examples) {
  auto edge = canonicalize(2, {{0, 1}});
  auto path = canonicalize(3, {{0, 1}, {1, 2}});
  auto triangle = canonicalize(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(edit_distance(edge, edge), 0);
  EXPECT_EQ(edit_distance(edge, path), 1);
  EXPECT_EQ(edit_distance(edge, triangle), 2);
}

TEST(EditDistance, SymmetricAndZeroOnlyOnDiagonal) {
  auto list = enumerate_templates(3);
  for (const auto& a : list) {
    for (const auto& b : list) {
      int d = edit_distance(a, b);
      EXPECT_EQ(d, edit_distance(b, a));
      EXPECT_EQ(d == 0, a == b);
      EXPECT_GE(d, std::abs(a.edge_count() - b.edge_count()));
    }
  }
}

TEST(Labeling, Validation) {
  auto g = LabeledGraph::identity(canonicalize(3, {{0, 1}, {1, 2}}));
  EXPECT_NO_THROW(validate_labeling(g, 3));
  EXPECT_THROW(validate_labeling(g, 2), ValidationError);
  g.labels = {1, 1, 2};
  EXPECT_THROW(validate_labeling(g, 5), ValidationError);
}
