#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ldgram/graph.hpp"
#include "ldgram/rational.hpp"

namespace ldgram {

// Pairs (vertex of g1, vertex of g2), sorted by the g1 vertex.
struct Matching {
  std::vector<std::pair<int, int>> pairs;

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;
};

// Vertex ids of the merged graph: g1 vertex i keeps id i, unmatched g2 vertices
// follow in increasing order.
struct MergeResult {
  int union_vertex_count = 0;
  std::vector<int> fused_1;
  std::vector<int> fused_2;

  std::vector<Edge> union_edges;
  std::vector<Edge> intersection_edges;
  std::vector<Edge> difference_edges;
  std::map<Edge, int> multiplicity;

  std::vector<int> delta_vertices;
  std::vector<std::vector<int>> delta_components;
  std::vector<bool> delta_component_pure;

  std::vector<int> unmatched_1;  // g1 vertex indices
  std::vector<int> unmatched_2;  // g2 vertex indices
  std::vector<std::pair<int, int>> semi_matched;
  std::vector<std::pair<int, int>> perfectly_matched;

  int cc_delta = 0;
  int cc_pure = 0;

  bool perfect() const { return difference_edges.empty() && unmatched_1.empty() && unmatched_2.empty(); }
};

struct Shadow {
  std::vector<int> unmatched_1;
  std::vector<int> unmatched_2;
  std::vector<std::pair<int, int>> semi_matched;

  friend bool operator==(const Shadow&, const Shadow&) = default;
  friend auto operator<=>(const Shadow&, const Shadow&) = default;
};

inline constexpr std::uint64_t kMatchingCap = 100'000'000;

// Number of partial injections (respecting forced root pairs).
std::uint64_t matching_count(const Template& g1, const Template& g2);

void for_each_matching(const Template& g1, const Template& g2,
                       const std::function<void(const Matching&)>& visit);
std::vector<Matching> enumerate_matchings(const Template& g1, const Template& g2);

MergeResult classify(const Template& g1, const Template& g2, const Matching& m);
bool is_star(const MergeResult& mr, const Template& g1, const Template& g2);

Shadow shadow_of(const MergeResult& mr);
std::vector<Matching> matchings_with_shadow(const Template& g1, const Template& g2, const Shadow& s);

BigInt labeling_count(const Template& g1, const Template& g2, const Matching& m, std::int64_t n);

// Orbits of matchings under Aut(g1) x Aut(g2).
struct MatchingOrbit {
  Matching representative;
  std::uint64_t size = 0;
};
std::vector<MatchingOrbit> matching_orbits(const Template& g1, const Template& g2);

// Both templates placed on node labels through the merged vertex ids (id + 1).
std::pair<LabeledGraph, LabeledGraph> labeled_pair(const Template& g1, const Template& g2,
                                                   const MergeResult& mr);

}  // namespace ldgram
