#include "ldgram/graph.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

std::vector<std::vector<int>> neighbours(int v, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(v));
  for (auto [a, b] : edges) {
    out[a].push_back(b);
    out[b].push_back(a);
  }
  for (auto& list : out) std::sort(list.begin(), list.end());
  return out;
}

std::vector<std::vector<char>> adjacency(int v, const std::vector<Edge>& edges) {
  std::vector<std::vector<char>> adj(v, std::vector<char>(v, 0));
  for (auto [a, b] : edges) adj[a][b] = adj[b][a] = 1;
  return adj;
}

// Lexicographically least relabeled edge list. Only breadth-first labelings can
// be optimal: label t always goes to a neighbour of the lowest label that still
// has unlabeled neighbours, because swapping it in strictly lowers that row.
class CanonicalSearch {
 public:
  CanonicalSearch(int v, const std::vector<Edge>& edges)
      : v_(v), edges_(edges), nbr_(neighbours(v, edges)), label_(v, -1), inv_(v, -1) {}

  std::vector<Edge> run(const std::optional<Edge>& roots) {
    int t = 0;
    if (roots) {
      assign(roots->first, 0);
      assign(roots->second, 1);
      t = 2;
    }
    search(t);
    return best_;
  }

 private:
  void assign(int vertex, int lab) {
    label_[vertex] = lab;
    inv_[lab] = vertex;
  }

  void search(int t) {
    if (t == v_) {
      leaf();
      return;
    }
    std::vector<int> candidates;
    for (int a = 0; a < t && candidates.empty(); ++a) {
      for (int u : nbr_[inv_[a]]) {
        if (label_[u] < 0) candidates.push_back(u);
      }
    }
    if (candidates.empty()) {
      for (int u = 0; u < v_; ++u) {
        if (label_[u] < 0) candidates.push_back(u);
      }
    }
    for (int c : candidates) {
      assign(c, t);
      search(t + 1);
      label_[c] = -1;
      inv_[t] = -1;
    }
  }

  void leaf() {
    scratch_.clear();
    for (auto [a, b] : edges_) {
      int x = label_[a], y = label_[b];
      scratch_.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(scratch_.begin(), scratch_.end());
    if (!have_best_ || scratch_ < best_) {
      best_ = scratch_;
      have_best_ = true;
    }
  }

  int v_;
  const std::vector<Edge>& edges_;
  std::vector<std::vector<int>> nbr_;
  std::vector<int> label_;
  std::vector<int> inv_;
  std::vector<Edge> best_;
  std::vector<Edge> scratch_;
  bool have_best_ = false;
};

void grow_automorphisms(const Template& t, const std::vector<std::vector<char>>& adj,
                        const std::vector<int>& degree, Permutation& image, std::vector<char>& used, int i,
                        std::vector<Permutation>& out) {
  if (i == t.vertex_count) {
    out.push_back(image);
    return;
  }
  for (int c = 0; c < t.vertex_count; ++c) {
    if (used[c] || degree[c] != degree[i]) continue;
    if (t.roots) {
      if (i == t.roots->first && c != t.roots->first) continue;
      if (i == t.roots->second && c != t.roots->second) continue;
      if (i != t.roots->first && i != t.roots->second && (c == t.roots->first || c == t.roots->second)) continue;
    }
    bool ok = true;
    for (int j = 0; j < i && ok; ++j) ok = adj[i][j] == adj[c][image[j]];
    if (!ok) continue;
    image[i] = c;
    used[c] = 1;
    grow_automorphisms(t, adj, degree, image, used, i + 1, out);
    used[c] = 0;
  }
}

std::vector<Template> enumerate_from(Template seed, int D, const EnumerationCaps& caps) {
  if (D < 1) throw ValidationError("D must be at least 1");
  if (D > caps.max_degree && !caps.allow_large) {
    throw CapExceeded("D=" + std::to_string(D) + " exceeds the degree cap " + std::to_string(caps.max_degree));
  }
  const int vertex_cap = caps.allow_large ? 1 << 20 : 2 * D + 2;
  std::vector<Template> all;
  std::vector<Template> level{seed};
  for (int e = seed.edge_count(); e < D; ++e) {
    std::set<Template, decltype(&template_less)> next(&template_less);
    for (const Template& t : level) {
      const int v = t.vertex_count;
      auto adj = adjacency(v, t.edges);
      for (int a = 0; a < v + 2; ++a) {
        for (int b = a + 1; b < v + 2; ++b) {
          if (a < v && b == v + 1) continue;  // one new vertex is always vertex v
          if (b < v && adj[a][b]) continue;
          int extra = (a >= v) + (b >= v);
          auto edges = t.edges;
          edges.emplace_back(a, b);
          next.insert(canonicalize(v + extra, edges, t.roots, vertex_cap));
        }
      }
    }
    level.assign(next.begin(), next.end());
    all.insert(all.end(), level.begin(), level.end());
  }
  if (seed.edge_count() > 0) all.insert(all.begin(), seed);
  std::sort(all.begin(), all.end(), template_less);
  return all;
}

}  // namespace

bool template_less(const Template& a, const Template& b) {
  if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
  if (a.vertex_count != b.vertex_count) return a.vertex_count < b.vertex_count;
  if (a.edges != b.edges) return a.edges < b.edges;
  return a.roots < b.roots;
}

std::string Template::to_string() const {
  std::ostringstream os;
  os << "v=" << vertex_count << ";roots=";
  if (roots) {
    os << roots->first << "," << roots->second;
  } else {
    os << "none";
  }
  os << ";edges=";
  for (auto [a, b] : edges) os << "(" << a << "," << b << ")";
  return os.str();
}

Template Template::parse(const std::string& text) {
  static const std::regex whole(R"(^v=(\d+);roots=(none|\d+,\d+);edges=((\(\d+,\d+\))*)$)");
  static const std::regex edge(R"(\((\d+),(\d+)\))");
  std::smatch m;
  if (!std::regex_match(text, m, whole)) throw ValidationError("malformed template: '" + text + "'");
  int v = std::stoi(m[1].str());
  std::optional<Edge> roots;
  if (m[2].str() != "none") {
    auto r = m[2].str();
    auto comma = r.find(',');
    roots = Edge{std::stoi(r.substr(0, comma)), std::stoi(r.substr(comma + 1))};
  }
  std::vector<Edge> edges;
  std::string rest = m[3].str();
  for (std::sregex_iterator it(rest.begin(), rest.end(), edge), end; it != end; ++it) {
    edges.emplace_back(std::stoi((*it)[1].str()), std::stoi((*it)[2].str()));
  }
  return canonicalize(v, edges, roots, std::max(v, kDefaultVertexCap));
}

Template canonicalize(int vertex_count, std::vector<Edge> edges, std::optional<Edge> roots, int vertex_cap) {
  if (vertex_count < 0) throw ValidationError("negative vertex count");
  if (vertex_count > vertex_cap) {
    throw CapExceeded("vertex count " + std::to_string(vertex_count) + " exceeds cap " + std::to_string(vertex_cap));
  }
  std::set<Edge> seen;
  std::vector<int> degree(vertex_count, 0);
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw ValidationError("duplicate edge");
    ++degree[a];
    ++degree[b];
  }
  if (roots) {
    auto [r1, r2] = *roots;
    if (r1 == r2 || r1 < 0 || r2 < 0 || r1 >= vertex_count || r2 >= vertex_count) {
      throw ValidationError("roots must be two distinct vertices");
    }
  }
  for (int u = 0; u < vertex_count; ++u) {
    bool is_root = roots && (u == roots->first || u == roots->second);
    if (degree[u] == 0 && !is_root) throw ValidationError("isolated non-root vertex " + std::to_string(u));
  }
  Template t;
  t.vertex_count = vertex_count;
  t.edges = CanonicalSearch(vertex_count, edges).run(roots);
  if (roots) t.roots = Edge{0, 1};
  return t;
}

std::vector<Permutation> automorphisms(const Template& t) {
  auto adj = adjacency(t.vertex_count, t.edges);
  std::vector<int> degree(t.vertex_count, 0);
  for (auto [a, b] : t.edges) ++degree[a], ++degree[b];
  Permutation image(t.vertex_count, -1);
  std::vector<char> used(t.vertex_count, 0);
  std::vector<Permutation> out;
  grow_automorphisms(t, adj, degree, image, used, 0, out);
  return out;
}

std::uint64_t automorphism_count(const Template& t) { return automorphisms(t).size(); }

std::vector<Template> enumerate_templates(int D, const EnumerationCaps& caps) {
  return enumerate_from(canonicalize(2, {{0, 1}}), D, caps);
}

std::vector<Template> enumerate_rooted_templates(int D, const EnumerationCaps& caps) {
  Template base;
  base.vertex_count = 2;
  base.roots = Edge{0, 1};
  return enumerate_from(base, D, caps);
}

std::vector<std::vector<int>> connected_components(const Template& t) {
  std::vector<int> parent(t.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : t.edges) parent[find(a)] = find(b);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(t.vertex_count, -1);
  for (int u = 0; u < t.vertex_count; ++u) {
    int r = find(u);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(u);
  }
  return out;
}

std::vector<std::vector<int>> nontrivial_components(const Template& t) {
  auto all = connected_components(t);
  std::vector<std::vector<int>> out;
  for (auto& c : all) {
    if (c.size() > 1) out.push_back(std::move(c));
  }
  return out;
}

LabeledGraph LabeledGraph::identity(const Template& t) {
  LabeledGraph g{t, {}};
  for (int i = 0; i < t.vertex_count; ++i) g.labels.push_back(i + 1);
  return g;
}

void validate_labeling(const LabeledGraph& g, std::int64_t n) {
  if (static_cast<int>(g.labels.size()) != g.shape.vertex_count) {
    throw ValidationError("labeling size does not match vertex count");
  }
  std::set<std::int64_t> seen;
  for (auto l : g.labels) {
    if (l < 1 || l > n) throw ValidationError("label " + std::to_string(l) + " outside [1, n]");
    if (!seen.insert(l).second) throw ValidationError("labeling is not injective");
  }
  if (g.shape.roots) {
    if (g.labels[g.shape.roots->first] != 1 || g.labels[g.shape.roots->second] != 2) {
      throw ValidationError("roots must be labeled 1 and 2");
    }
  }
}

}  // namespace ldgram
