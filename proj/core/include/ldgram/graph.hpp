#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ldgram {

using Edge = std::pair<int, int>;
using Permutation = std::vector<int>;

inline constexpr int kDefaultDegreeCap = 5;
inline constexpr int kDefaultVertexCap = 2 * kDefaultDegreeCap + 2;

// Canonical unlabeled graph. Rooted templates keep their roots at vertices 0 and 1.
struct Template {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::optional<Edge> roots;

  bool rooted() const { return roots.has_value(); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  bool empty() const { return edges.empty() && vertex_count == 0; }

  // v=<int>;roots=<i,j|none>;edges=(a,b)(c,d)...
  std::string to_string() const;
  static Template parse(const std::string& text);

  friend bool operator==(const Template&, const Template&) = default;
};

// Ordering used by the enumerators: edge count, vertex count, edge list.
bool template_less(const Template& a, const Template& b);

struct EnumerationCaps {
  int max_degree = kDefaultDegreeCap;
  bool allow_large = false;
};

Template canonicalize(int vertex_count, std::vector<Edge> edges,
                      std::optional<Edge> roots = std::nullopt,
                      int vertex_cap = kDefaultVertexCap);

// All edge-preserving permutations; roots are fixed pointwise for rooted templates.
std::vector<Permutation> automorphisms(const Template& t);
std::uint64_t automorphism_count(const Template& t);

std::vector<Template> enumerate_templates(int D, const EnumerationCaps& caps = {});
std::vector<Template> enumerate_rooted_templates(int D, const EnumerationCaps& caps = {});

// All components, isolated roots included as singletons.
std::vector<std::vector<int>> connected_components(const Template& t);
// Components carrying at least one edge.
std::vector<std::vector<int>> nontrivial_components(const Template& t);

// Minimum |E_delta| over all matchings (root pairs forced for rooted templates).
int edit_distance(const Template& g1, const Template& g2);

// Template vertices placed on node labels 1..n.
struct LabeledGraph {
  Template shape;
  std::vector<std::int64_t> labels;

  // Labels 1..|V| in vertex order.
  static LabeledGraph identity(const Template& t);
};

void validate_labeling(const LabeledGraph& g, std::int64_t n);

}  // namespace ldgram
