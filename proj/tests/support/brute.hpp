#pragma once

// Reference implementations used only by the tests. Everything here is
// computed from first principles: explicit latent enumeration, explicit
// Bernoulli moments, explicit labeling sums. No code is shared with the
// library except the Template/ModelSpec value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "ldgram/graph.hpp"
#include "ldgram/model.hpp"
#include "ldgram/rational.hpp"

namespace brute {

using ldgram::Family;
using ldgram::ModelSpec;
using ldgram::Rational;
using ldgram::Sampling;
using ldgram::Template;

using NodePair = std::pair<std::int64_t, std::int64_t>;
// Edge multiset over node labels (1-based), with multiplicities.
using Monomial = std::map<NodePair, int>;

inline NodePair ordered(std::int64_t a, std::int64_t b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }

template <class T>
T as(const Rational& r);
template <>
inline Rational as<Rational>(const Rational& r) { return r; }
template <>
inline double as<double>(const Rational& r) { return r.get_d(); }

inline bool theta_on(const ModelSpec& m, std::int64_t a, std::int64_t b) {
  switch (m.family) {
    case Family::HS: return a <= m.k && b <= m.k;
    case Family::SBM: return (a - 1) / m.k == (b - 1) / m.k;
    case Family::TS: return 2 * std::llabs(a - b) <= m.k;
  }
  return false;
}

inline bool erasable(const ModelSpec& m, std::int64_t lhat, std::int64_t a) {
  switch (m.family) {
    case Family::HS: return a <= m.k;
    case Family::SBM: return (a - 1) / m.k + 1 == lhat;
    case Family::TS: return 2 * std::llabs(a - lhat) <= m.k;
  }
  return false;
}

inline std::int64_t lhat_values(const ModelSpec& m) {
  switch (m.family) {
    case Family::HS: return 1;
    case Family::SBM: return m.n / m.k;
    case Family::TS: return m.n;
  }
  return 1;
}

// E[Y^r | edge probability p] with Y = Y* - q.
template <class T>
T bernoulli_moment(const T& p, const T& q, int r) {
  T one_minus_q = T(1) - q, minus_q = -q, a = 1, b = 1;
  for (int i = 0; i < r; ++i) {
    a *= one_minus_q;
    b *= minus_q;
  }
  return p * a + (T(1) - p) * b;
}

struct Query {
  Monomial monomial;
  // Weight by x = 1{theta(z_1, z_2) != 0}; nodes 1 and 2 become involved.
  bool x_weight = false;
  std::optional<Rational> epsilon;  // alteration
};

// E[ x^? * prod Y_e^{r_e} ] by enumerating the latent labels of the involved
// nodes, l-hat and the erasure bits.
template <class T>
T expect(const ModelSpec& m, const Query& query) {
  std::vector<std::int64_t> nodes;
  for (const auto& [e, r] : query.monomial) {
    nodes.push_back(e.first);
    nodes.push_back(e.second);
  }
  if (query.x_weight) {
    nodes.push_back(1);
    nodes.push_back(2);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::map<std::int64_t, int> slot;
  for (std::size_t i = 0; i < nodes.size(); ++i) slot[nodes[i]] = static_cast<int>(i);
  const int s = static_cast<int>(nodes.size());
  const std::int64_t n = m.n;
  const T q = as<T>(m.q), lambda = as<T>(m.lambda);
  const bool altered = query.epsilon.has_value();
  const T eps = altered ? as<T>(*query.epsilon) : T(0);

  struct Factor {
    int a, b, r;
  };
  std::vector<Factor> factors;
  for (const auto& [e, r] : query.monomial) factors.push_back({slot[e.first], slot[e.second], r});

  T total = 0;
  std::uint64_t states = 0;
  std::vector<std::int64_t> z(s);
  std::vector<char> used(n + 1, 0);

  auto conditional = [&](const std::vector<char>& erased) {
    T value = 1;
    for (const auto& f : factors) {
      bool on = theta_on(m, z[f.a], z[f.b]) && !(erased[f.a] || erased[f.b]);
      value *= bernoulli_moment<T>(q + (on ? lambda : T(0)), q, f.r);
    }
    if (query.x_weight) value *= theta_on(m, z[slot[1]], z[slot[2]]) && m.lambda > 0 ? T(1) : T(0);
    return value;
  };

  auto leaf = [&]() {
    ++states;
    if (!altered) {
      total += conditional(std::vector<char>(s, 0));
      return;
    }
    const std::int64_t L = lhat_values(m);
    T sum = 0;
    for (std::int64_t lhat = 1; lhat <= L; ++lhat) {
      std::vector<int> candidates;
      for (int i = 0; i < s; ++i) {
        if (erasable(m, lhat, z[i])) candidates.push_back(i);
      }
      const int c = static_cast<int>(candidates.size());
      for (std::uint32_t bits = 0; bits < (1u << c); ++bits) {
        std::vector<char> erased(s, 0);
        T w = 1;
        for (int j = 0; j < c; ++j) {
          bool on = bits >> j & 1;
          erased[candidates[j]] = on;
          w *= on ? eps : T(1) - eps;
        }
        sum += w * conditional(erased);
      }
    }
    total += sum / T(L);
  };

  std::function<void(int)> rec = [&](int i) {
    if (i == s) {
      leaf();
      return;
    }
    for (std::int64_t v = 1; v <= n; ++v) {
      if (m.sampling == Sampling::Permutation && used[v]) continue;
      z[i] = v;
      used[v] = 1;
      rec(i + 1);
      used[v] = 0;
    }
  };
  rec(0);
  return states == 0 ? T(0) : total / T(states);
}

// Relabels nodes by first appearance (outside nodes 1 and 2, which are kept
// when x-weighted) so that exchangeable expectations can be cached.
inline Monomial normalize(const Monomial& mono, bool keep_12) {
  std::map<std::int64_t, std::int64_t> relabel;
  std::int64_t next = 1;
  if (keep_12) {
    relabel[1] = 1;
    relabel[2] = 2;
    next = 3;
  }
  for (const auto& [e, r] : mono) {
    for (auto v : {e.first, e.second}) {
      if (!relabel.count(v)) relabel[v] = next++;
    }
  }
  Monomial out;
  for (const auto& [e, r] : mono) out[ordered(relabel[e.first], relabel[e.second])] += r;
  return out;
}

template <class T>
class Oracle {
 public:
  explicit Oracle(ModelSpec m, std::optional<Rational> eps = std::nullopt, bool x_weight = false)
      : m_(std::move(m)), eps_(std::move(eps)), x_(x_weight) {}

  // Under H0, unweighted.
  T null_moment(const Monomial& mono) { return cached(mono, false, std::nullopt, null_cache_); }
  // Under the configured law (alteration and/or x weight).
  T moment(const Monomial& mono) { return cached(mono, x_, eps_, cache_); }

  const ModelSpec& model() const { return m_; }

 private:
  T cached(const Monomial& mono, bool x, const std::optional<Rational>& eps, std::map<Monomial, T>& cache) {
    // Relabeling is only harmless when the law is exchangeable in the nodes,
    // which holds for all six models; the x weight pins nodes 1 and 2.
    Monomial key = normalize(mono, x);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    T v = expect<T>(m_, Query{key, x, eps});
    cache.emplace(key, v);
    return v;
  }

  ModelSpec m_;
  std::optional<Rational> eps_;
  bool x_;
  std::map<Monomial, T> null_cache_, cache_;
};

inline std::vector<std::vector<int>> edge_components(const Template& t) {
  std::vector<int> parent(t.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (auto [a, b] : t.edges) parent[find(a)] = find(b);
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < t.edges.size(); ++i) groups[find(t.edges[i].first)].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(g);
  return out;
}

// Pbar_{G,pi} as a list of (coefficient, monomial) under H0 centering.
template <class T>
std::vector<std::pair<T, Monomial>> centered_expansion(Oracle<T>& oracle, const Template& t,
                                                       const std::vector<std::int64_t>& label) {
  auto comps = edge_components(t);
  std::vector<std::pair<T, Monomial>> terms{{T(1), Monomial{}}};
  for (const auto& comp : comps) {
    Monomial mono;
    for (int e : comp) mono[ordered(label[t.edges[e].first], label[t.edges[e].second])] += 1;
    T mu = oracle.null_moment(mono);
    std::vector<std::pair<T, Monomial>> next;
    for (const auto& [c, base] : terms) {
      Monomial with = base;
      for (const auto& [e, r] : mono) with[e] += r;
      next.emplace_back(c, with);
      if (mu != T(0)) next.emplace_back(-c * mu, base);
    }
    terms = std::move(next);
  }
  return terms;
}

template <class T>
T expect_expansion(Oracle<T>& oracle, const std::vector<std::pair<T, Monomial>>& terms) {
  T total = 0;
  for (const auto& [c, mono] : terms) total += c * oracle.moment(mono);
  return total;
}

// Every injective placement of the template on [n]; roots go to nodes 1 and 2.
inline void for_each_labeling(const Template& t, std::int64_t n,
                              const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> label(t.vertex_count, 0);
  std::vector<char> used(n + 1, 0);
  if (t.roots) {
    label[t.roots->first] = 1;
    label[t.roots->second] = 2;
    used[1] = used[2] = 1;
  }
  std::function<void(int)> rec = [&](int v) {
    if (v == t.vertex_count) {
      visit(label);
      return;
    }
    if (label[v] != 0) {
      rec(v + 1);
      return;
    }
    for (std::int64_t l = 1; l <= n; ++l) {
      if (used[l]) continue;
      used[l] = 1;
      label[v] = l;
      rec(v + 1);
      label[v] = 0;
      used[l] = 0;
    }
  };
  rec(0);
}

inline std::uint64_t brute_automorphisms(const Template& t) {
  std::vector<int> perm(t.vertex_count);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::pair<int, int>> edges;
  for (auto [a, b] : t.edges) edges.insert({std::min(a, b), std::max(a, b)});
  std::uint64_t count = 0;
  do {
    if (t.roots && (perm[t.roots->first] != t.roots->first || perm[t.roots->second] != t.roots->second)) continue;
    bool ok = true;
    for (auto [a, b] : edges) {
      if (!edges.count({std::min(perm[a], perm[b]), std::max(perm[a], perm[b])})) {
        ok = false;
        break;
      }
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

inline Rational brute_variance(const Template& t, const ModelSpec& m) {
  if (t.vertex_count == 0) return 1;
  Rational v = 1;
  const int pinned = t.roots ? 2 : 0;
  for (int i = pinned; i < t.vertex_count; ++i) v *= m.n - i;
  v *= static_cast<unsigned long>(brute_automorphisms(t));
  Rational qbar = m.q * (1 - m.q);
  for (int i = 0; i < t.edge_count(); ++i) v *= qbar;
  return v;
}

inline std::uint64_t labeling_total(const Template& t, std::int64_t n) {
  std::uint64_t c = 1;
  for (int i = t.roots ? 2 : 0; i < t.vertex_count; ++i) c *= static_cast<std::uint64_t>(n - i);
  return c;
}

inline std::vector<std::int64_t> first_labeling(const Template& t) {
  std::vector<std::int64_t> label(t.vertex_count);
  std::int64_t next = t.roots ? 3 : 1;
  for (int v = 0; v < t.vertex_count; ++v) {
    if (t.roots && v == t.roots->first) label[v] = 1;
    else if (t.roots && v == t.roots->second) label[v] = 2;
    else label[v] = next++;
  }
  return label;
}

// Unnormalized E[Pbar_{G1} Pbar_{G2}] summed over all labelings. The first
// labeling is fixed and the sum multiplied by its count (exchangeability).
template <class T>
T gram_scalar(Oracle<T>& oracle, const Template& g1, const Template& g2) {
  const std::int64_t n = oracle.model().n;
  auto left = centered_expansion(oracle, g1, first_labeling(g1));
  T total = 0;
  for_each_labeling(g2, n, [&](const std::vector<std::int64_t>& label) {
    auto right = centered_expansion(oracle, g2, label);
    for (const auto& [c1, m1] : left) {
      for (const auto& [c2, m2] : right) {
        Monomial prod = m1;
        for (const auto& [e, r] : m2) prod[e] += r;
        total += c1 * c2 * oracle.moment(prod);
      }
    }
  });
  return total * as<T>(Rational(static_cast<unsigned long>(labeling_total(g1, n))));
}

// Sum over labelings of E[Pbar_{G,pi}] under the oracle's law.
template <class T>
T mean_scalar(Oracle<T>& oracle, const Template& g) {
  auto terms = centered_expansion(oracle, g, first_labeling(g));
  return expect_expansion(oracle, terms) * as<T>(Rational(static_cast<unsigned long>(labeling_total(g, oracle.model().n))));
}

inline double normalized(double scalar, const Rational& v1, const Rational& v2) {
  return scalar / std::sqrt(v1.get_d() * v2.get_d());
}

}  // namespace brute
