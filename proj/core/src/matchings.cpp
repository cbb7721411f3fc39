#include "ldgram/matchings.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

void check_roots(const Template& g1, const Template& g2) {
  if (g1.rooted() != g2.rooted()) throw ValidationError("cannot mix rooted and unrooted templates");
}

bool is_root(const Template& t, int v) { return t.roots && (v == t.roots->first || v == t.roots->second); }

int forced_partner(const Template& g1, const Template& g2, int v) {
  if (!g1.roots) return -1;
  if (v == g1.roots->first) return g2.roots->first;
  if (v == g1.roots->second) return g2.roots->second;
  return -1;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return static_cast<std::uint64_t>(out);
}

void backtrack(const Template& g1, const Template& g2, int i, std::vector<char>& used, Matching& m,
               const std::function<void(const Matching&)>& visit) {
  if (i == g1.vertex_count) {
    visit(m);
    return;
  }
  int forced = forced_partner(g1, g2, i);
  if (forced >= 0) {
    m.pairs.emplace_back(i, forced);
    backtrack(g1, g2, i + 1, used, m, visit);
    m.pairs.pop_back();
    return;
  }
  backtrack(g1, g2, i + 1, used, m, visit);
  for (int j = 0; j < g2.vertex_count; ++j) {
    if (used[j] || is_root(g2, j)) continue;
    used[j] = 1;
    m.pairs.emplace_back(i, j);
    backtrack(g1, g2, i + 1, used, m, visit);
    m.pairs.pop_back();
    used[j] = 0;
  }
}

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::uint64_t encode(const std::vector<int>& image) {
  std::uint64_t key = 0;
  for (int x : image) key = (key << 5) | static_cast<std::uint64_t>(x + 1);
  return key;
}

}  // namespace

std::uint64_t matching_count(const Template& g1, const Template& g2) {
  check_roots(g1, g2);
  std::uint64_t a = g1.vertex_count - (g1.rooted() ? 2 : 0);
  std::uint64_t b = g2.vertex_count - (g2.rooted() ? 2 : 0);
  unsigned __int128 total = 0;
  std::uint64_t fact = 1;
  for (std::uint64_t k = 0; k <= std::min(a, b); ++k) {
    if (k > 0) fact *= k;
    total += static_cast<unsigned __int128>(binomial(a, k)) * binomial(b, k) * fact;
    if (total > kMatchingCap * 16) break;
  }
  return total > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                           : static_cast<std::uint64_t>(total);
}

void for_each_matching(const Template& g1, const Template& g2, const std::function<void(const Matching&)>& visit) {
  check_roots(g1, g2);
  if (matching_count(g1, g2) > kMatchingCap) throw CapExceeded("too many matchings to enumerate");
  std::vector<char> used(g2.vertex_count, 0);
  Matching m;
  backtrack(g1, g2, 0, used, m, visit);
}

std::vector<Matching> enumerate_matchings(const Template& g1, const Template& g2) {
  std::vector<Matching> out;
  for_each_matching(g1, g2, [&](const Matching& m) { out.push_back(m); });
  return out;
}

MergeResult classify(const Template& g1, const Template& g2, const Matching& m) {
  MergeResult r;
  const int v1 = g1.vertex_count;
  r.fused_1.resize(v1);
  std::iota(r.fused_1.begin(), r.fused_1.end(), 0);
  r.fused_2.assign(g2.vertex_count, -1);
  std::vector<char> matched(v1, 0);
  for (auto [i, j] : m.pairs) {
    r.fused_2[j] = i;
    matched[i] = 1;
  }
  int next = v1;
  for (int j = 0; j < g2.vertex_count; ++j) {
    if (r.fused_2[j] < 0) {
      r.fused_2[j] = next++;
      r.unmatched_2.push_back(j);
    }
  }
  for (int i = 0; i < v1; ++i) {
    if (!matched[i]) r.unmatched_1.push_back(i);
  }
  r.union_vertex_count = next;

  std::set<Edge> e1, e2;
  for (auto [a, b] : g1.edges) e1.insert(ordered(r.fused_1[a], r.fused_1[b]));
  for (auto [a, b] : g2.edges) e2.insert(ordered(r.fused_2[a], r.fused_2[b]));
  std::set_union(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(r.union_edges));
  std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(r.intersection_edges));
  std::set_symmetric_difference(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(r.difference_edges));
  for (const auto& e : r.union_edges) r.multiplicity[e] = 1;
  for (const auto& e : r.intersection_edges) r.multiplicity[e] = 2;

  std::vector<char> in_delta(r.union_vertex_count, 0);
  for (auto [a, b] : r.difference_edges) in_delta[a] = in_delta[b] = 1;
  for (int u = 0; u < r.union_vertex_count; ++u) {
    if (in_delta[u]) r.delta_vertices.push_back(u);
  }
  for (auto pr : m.pairs) {
    (in_delta[pr.first] ? r.semi_matched : r.perfectly_matched).push_back(pr);
  }

  std::vector<int> parent(r.union_vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : r.difference_edges) parent[find(a)] = find(b);
  std::vector<int> slot(r.union_vertex_count, -1);
  for (int u : r.delta_vertices) {
    int root = find(u);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(r.delta_components.size());
      r.delta_components.emplace_back();
    }
    r.delta_components[slot[root]].push_back(u);
  }
  for (const auto& comp : r.delta_components) {
    // Unmatched vertices of one side are never adjacent to those of the other.
    bool pure = std::none_of(comp.begin(), comp.end(), [&](int u) { return u < v1 && matched[u]; });
    r.delta_component_pure.push_back(pure);
    r.cc_pure += pure;
  }
  r.cc_delta = static_cast<int>(r.delta_components.size());
  return r;
}

bool is_star(const MergeResult& mr, const Template& g1, const Template& g2) {
  std::vector<char> hit1(g1.vertex_count, 1), hit2(g2.vertex_count, 1);
  for (int u : mr.unmatched_1) hit1[u] = 0;
  for (int u : mr.unmatched_2) hit2[u] = 0;
  auto covered = [](const Template& t, const std::vector<char>& hit) {
    for (const auto& comp : connected_components(t)) {
      if (std::none_of(comp.begin(), comp.end(), [&](int u) { return hit[u] != 0; })) return false;
    }
    return true;
  };
  return covered(g1, hit1) && covered(g2, hit2);
}

Shadow shadow_of(const MergeResult& mr) { return Shadow{mr.unmatched_1, mr.unmatched_2, mr.semi_matched}; }

std::vector<Matching> matchings_with_shadow(const Template& g1, const Template& g2, const Shadow& s) {
  check_roots(g1, g2);
  std::vector<char> free_1(g1.vertex_count, 0), free_2(g2.vertex_count, 0);
  for (int v : s.unmatched_1) {
    if (v < 0 || v >= g1.vertex_count || free_1[v]) return {};
    free_1[v] = 1;
  }
  for (int v : s.unmatched_2) {
    if (v < 0 || v >= g2.vertex_count || free_2[v]) return {};
    free_2[v] = 1;
  }
  // The shadow fixes both matched vertex sets; try every bijection between them.
  std::vector<int> left, right;
  for (int v = 0; v < g1.vertex_count; ++v) {
    if (!free_1[v]) left.push_back(v);
  }
  for (int v = 0; v < g2.vertex_count; ++v) {
    if (!free_2[v]) right.push_back(v);
  }
  if (left.size() != right.size()) return {};
  std::vector<Matching> out;
  do {
    Matching m;
    bool roots_ok = true;
    for (std::size_t i = 0; i < left.size(); ++i) {
      m.pairs.emplace_back(left[i], right[i]);
      if (g1.rooted() && (left[i] == g1.roots->first || left[i] == g1.roots->second)) {
        const int want = left[i] == g1.roots->first ? g2.roots->first : g2.roots->second;
        roots_ok = roots_ok && right[i] == want;
      }
    }
    if (g1.rooted()) {
      roots_ok = roots_ok && !free_1[g1.roots->first] && !free_1[g1.roots->second];
    }
    if (roots_ok && shadow_of(classify(g1, g2, m)) == s) out.push_back(std::move(m));
  } while (std::next_permutation(right.begin(), right.end()));
  return out;
}

BigInt labeling_count(const Template& g1, const Template& g2, const Matching& m, std::int64_t n) {
  check_roots(g1, g2);
  const std::int64_t v = g1.vertex_count + g2.vertex_count - static_cast<std::int64_t>(m.size());
  if (n < v) throw ValidationError("n=" + std::to_string(n) + " is smaller than the merged vertex count");
  if (g1.rooted()) return falling_factorial(n - 2, v - 2);
  return falling_factorial(n, v);
}

std::vector<MatchingOrbit> matching_orbits(const Template& g1, const Template& g2) {
  const auto aut1 = automorphisms(g1);
  const auto aut2 = automorphisms(g2);
  std::unordered_set<std::uint64_t> visited;
  std::vector<MatchingOrbit> out;
  std::vector<int> image(g1.vertex_count);
  std::unordered_set<std::uint64_t> orbit;
  for_each_matching(g1, g2, [&](const Matching& m) {
    std::fill(image.begin(), image.end(), -1);
    for (auto [i, j] : m.pairs) image[i] = j;
    if (visited.count(encode(image))) return;
    orbit.clear();
    for (const auto& s1 : aut1) {
      for (const auto& s2 : aut2) {
        std::fill(image.begin(), image.end(), -1);
        for (auto [i, j] : m.pairs) image[s1[i]] = s2[j];
        orbit.insert(encode(image));
      }
    }
    visited.insert(orbit.begin(), orbit.end());
    out.push_back(MatchingOrbit{m, orbit.size()});
  });
  return out;
}

std::pair<LabeledGraph, LabeledGraph> labeled_pair(const Template& g1, const Template& g2, const MergeResult& mr) {
  LabeledGraph a{g1, {}}, b{g2, {}};
  for (int u : mr.fused_1) a.labels.push_back(u + 1);
  for (int u : mr.fused_2) b.labels.push_back(u + 1);
  return {a, b};
}

int edit_distance(const Template& g1, const Template& g2) {
  check_roots(g1, g2);
  std::vector<std::vector<char>> adj2(g2.vertex_count, std::vector<char>(g2.vertex_count, 0));
  for (auto [a, b] : g2.edges) adj2[a][b] = adj2[b][a] = 1;
  int best = g1.edge_count() + g2.edge_count();
  std::vector<int> image(g1.vertex_count);
  for_each_matching(g1, g2, [&](const Matching& m) {
    std::fill(image.begin(), image.end(), -1);
    for (auto [i, j] : m.pairs) image[i] = j;
    int shared = 0;
    for (auto [a, b] : g1.edges) {
      if (image[a] >= 0 && image[b] >= 0 && adj2[image[a]][image[b]]) ++shared;
    }
    best = std::min(best, g1.edge_count() + g2.edge_count() - 2 * shared);
  });
  return best;
}

}  // namespace ldgram
