#include "expectation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>

#include "ldgram/errors.hpp"

namespace ldgram::detail {

namespace {

struct Key {
  std::uint32_t cls = 0;
  std::uint32_t mode = 0;
  std::uint64_t fmask = 0;
  std::uint64_t vmask = 0;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = k.fmask * 0x9E3779B97F4A7C15ULL;
    h ^= (k.vmask + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::uint64_t>(k.cls) << 32 | k.mode) * 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

using Histogram = std::unordered_map<Key, std::uint64_t, KeyHash>;

Rational bigq(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Sum of count * weight(cls, mode) * pair products * vertex products.
template <class Weight>
Rational fold(const FactorGraph& g, const Histogram& hist, Weight weight) {
  std::unordered_map<std::uint64_t, Rational> pair_cache, vertex_cache;
  auto pair_product = [&](std::uint64_t mask) -> const Rational& {
    auto it = pair_cache.find(mask);
    if (it != pair_cache.end()) return it->second;
    Rational p = 1;
    for (std::size_t i = 0; i < g.pairs.size(); ++i) p *= (mask >> i & 1) ? g.pairs[i].on : g.pairs[i].off;
    return pair_cache.emplace(mask, p).first->second;
  };
  auto vertex_product = [&](std::uint64_t mask) -> const Rational& {
    auto it = vertex_cache.find(mask);
    if (it != vertex_cache.end()) return it->second;
    Rational p = 1;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      p *= (mask >> i & 1) ? g.vertices[i].inside : g.vertices[i].outside;
    }
    return vertex_cache.emplace(mask, p).first->second;
  };
  // Sort keys so the result never depends on hash iteration order.
  std::vector<std::pair<Key, std::uint64_t>> items(hist.begin(), hist.end());
  std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first.cls, x.first.mode, x.first.fmask, x.first.vmask) <
           std::tie(y.first.cls, y.first.mode, y.first.fmask, y.first.vmask);
  });
  Rational total = 0;
  for (const auto& [key, count] : items) {
    const Rational& pp = pair_product(key.fmask);
    if (pp == 0) continue;
    Rational term = pp * vertex_product(key.vmask) * weight(key.cls, key.mode);
    total += term * BigInt(static_cast<unsigned long>(count));
  }
  return total;
}

// Saturating product for state-space estimates.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

bool has_vertex_factors(const FactorGraph& g) { return !g.vertices.empty(); }

// ---- hidden subclique: one membership bit per node ----

std::optional<Rational> eval_hs(const ModelSpec& model, const FactorGraph& g, std::uint64_t budget) {
  const int m = g.vertex_count;
  std::vector<char> forced(m, 0);
  for (const auto& f : g.pairs) {
    if (f.off == 0) forced[f.a] = forced[f.b] = 1;
  }
  std::vector<int> free_vertices;
  for (int v = 0; v < m; ++v) {
    if (!forced[v]) free_vertices.push_back(v);
  }
  if (free_vertices.size() >= 63 || (std::uint64_t{1} << free_vertices.size()) > budget) return std::nullopt;

  Histogram hist;
  std::vector<char> member(m, 0);
  const std::uint64_t total = std::uint64_t{1} << free_vertices.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int v = 0; v < m; ++v) member[v] = forced[v];
    for (std::size_t i = 0; i < free_vertices.size(); ++i) member[free_vertices[i]] = mask >> i & 1;
    Key key;
    key.cls = static_cast<std::uint32_t>(std::count(member.begin(), member.end(), 1));
    for (std::size_t i = 0; i < g.pairs.size(); ++i) {
      if (member[g.pairs[i].a] && member[g.pairs[i].b]) key.fmask |= std::uint64_t{1} << i;
    }
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      if (member[g.vertices[i].v]) key.vmask |= std::uint64_t{1} << i;
    }
    ++hist[key];
  }

  std::vector<Rational> weight(m + 1);
  const Rational rho(model.k, model.n);
  for (int s = 0; s <= m; ++s) {
    if (model.sampling == Sampling::Independent) {
      weight[s] = rational_pow(rho, s) * rational_pow(1 - rho, m - s);
    } else {
      weight[s] = bigq(falling_factorial(model.k, s) * falling_factorial(model.n - model.k, m - s),
                       falling_factorial(model.n, m));
    }
  }
  return fold(g, hist, [&](std::uint32_t cls, std::uint32_t) -> const Rational& { return weight[cls]; });
}

// ---- stochastic block model: set partitions of the nodes ----

std::uint64_t bell_number(int r) {
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < r; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(std::min<std::uint64_t>(next.back() + x, std::uint64_t{1} << 62));
    row = next;
  }
  return row.front();
}

std::optional<Rational> eval_sbm(const ModelSpec& model, const FactorGraph& g, std::uint64_t budget) {
  const int m = g.vertex_count;
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : g.pairs) {
    if (f.off == 0) parent[find(f.a)] = find(f.b);
  }
  std::vector<int> super(m, -1), super_size;
  for (int v = 0; v < m; ++v) {
    int root = find(v);
    if (super[root] < 0) {
      super[root] = static_cast<int>(super_size.size());
      super_size.push_back(0);
    }
    super[v] = super[root];
    ++super_size[super[v]];
  }
  const int r = static_cast<int>(super_size.size());
  const bool altered = has_vertex_factors(g);
  if (bell_number(r) > budget / (altered ? static_cast<std::uint64_t>(r + 1) : 1)) return std::nullopt;

  const std::int64_t K = model.groups();
  std::map<std::vector<int>, std::uint32_t> signature_id;
  std::vector<std::pair<int, std::vector<int>>> signatures;  // (t, sorted block sizes)
  Histogram hist;

  std::vector<int> block(r, 0);  // restricted growth string
  std::vector<int> sizes;
  auto visit = [&](int t) {
    sizes.assign(t, 0);
    for (int s = 0; s < r; ++s) sizes[block[s]] += super_size[s];
    auto sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    auto [it, inserted] = signature_id.emplace(sorted, static_cast<std::uint32_t>(signatures.size()));
    if (inserted) signatures.emplace_back(t, sorted);
    Key key;
    key.cls = it->second;
    for (std::size_t i = 0; i < g.pairs.size(); ++i) {
      if (block[super[g.pairs[i].a]] == block[super[g.pairs[i].b]]) key.fmask |= std::uint64_t{1} << i;
    }
    if (!altered) {
      ++hist[key];
      return;
    }
    key.mode = 0;  // lhat hits none of the occupied groups
    ++hist[key];
    key.mode = 1;
    for (int b = 0; b < t; ++b) {
      key.vmask = 0;
      for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        if (block[super[g.vertices[i].v]] == b) key.vmask |= std::uint64_t{1} << i;
      }
      ++hist[key];
    }
  };
  std::function<void(int, int)> rec = [&](int i, int t) {
    if (i == r) {
      visit(t);
      return;
    }
    for (int b = 0; b <= t && b < K; ++b) {
      block[i] = b;
      rec(i + 1, std::max(t, b + 1));
    }
  };
  if (r == 0) {
    visit(0);
  } else {
    rec(0, 0);
  }

  std::vector<Rational> weight;
  for (const auto& [t, sorted] : signatures) {
    if (model.sampling == Sampling::Independent) {
      BigInt den;
      mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(K), static_cast<unsigned long>(m));
      weight.push_back(bigq(falling_factorial(K, t), den));
    } else {
      BigInt num = falling_factorial(K, t);
      for (int s : sorted) num *= falling_factorial(model.k, s);
      weight.push_back(bigq(num, falling_factorial(model.n, m)));
    }
  }
  return fold(g, hist, [&](std::uint32_t cls, std::uint32_t mode) -> Rational {
    if (!altered) return weight[cls];
    const int t = signatures[cls].first;
    return mode == 0 ? weight[cls] * Rational(K - t, K) : weight[cls] * Rational(1, K);
  });
}

// ---- seriation: explicit label tuples ----

std::optional<Rational> eval_ts(const ModelSpec& model, const FactorGraph& g, std::uint64_t budget) {
  const int m = g.vertex_count;
  const std::int64_t n = model.n;
  const std::int64_t half = model.k / 2;
  const bool distinct = model.sampling == Sampling::Permutation;
  const bool altered = has_vertex_factors(g);

  std::vector<std::vector<int>> forced_nbr(m);
  for (const auto& f : g.pairs) {
    if (f.off == 0) {
      forced_nbr[f.a].push_back(f.b);
      forced_nbr[f.b].push_back(f.a);
    }
  }
  // Breadth-first order over forced pairs; each later vertex is anchored to an earlier one.
  std::vector<int> order, anchor(m, -1);
  std::vector<char> placed(m, 0);
  for (int s = 0; s < m; ++s) {
    if (placed[s]) continue;
    placed[s] = 1;
    order.push_back(s);
    for (std::size_t h = order.size() - 1; h < order.size(); ++h) {
      for (int u : forced_nbr[order[h]]) {
        if (!placed[u]) {
          placed[u] = 1;
          anchor[u] = order[h];
          order.push_back(u);
        }
      }
    }
  }
  std::uint64_t states = altered ? static_cast<std::uint64_t>(n) : 1;
  for (int v : order) states = sat_mul(states, anchor[v] < 0 ? n : std::min<std::int64_t>(n, 2 * half + 1));
  if (states > budget) return std::nullopt;

  // Pair checks performed when the later endpoint is assigned.
  std::vector<int> position(m);
  for (int i = 0; i < m; ++i) position[order[i]] = i;
  std::vector<std::vector<int>> forced_checks(m);
  for (const auto& f : g.pairs) {
    if (f.off != 0) continue;
    int later = position[f.a] > position[f.b] ? f.a : f.b;
    forced_checks[later].push_back(f.a == later ? f.b : f.a);
  }

  Histogram hist;
  std::vector<std::int64_t> z(m, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      Key key;
      for (std::size_t p = 0; p < g.pairs.size(); ++p) {
        if (model.active(z[g.pairs[p].a], z[g.pairs[p].b])) key.fmask |= std::uint64_t{1} << p;
      }
      if (!altered) {
        ++hist[key];
        return;
      }
      for (std::int64_t lhat = 1; lhat <= n; ++lhat) {
        key.vmask = 0;
        for (std::size_t p = 0; p < g.vertices.size(); ++p) {
          if (model.in_altered_set(lhat, z[g.vertices[p].v])) key.vmask |= std::uint64_t{1} << p;
        }
        ++hist[key];
      }
      return;
    }
    const int v = order[i];
    std::int64_t lo = 1, hi = n;
    if (anchor[v] >= 0) {
      lo = std::max<std::int64_t>(1, z[anchor[v]] - half);
      hi = std::min<std::int64_t>(n, z[anchor[v]] + half);
    }
    for (std::int64_t label = lo; label <= hi; ++label) {
      bool ok = true;
      if (distinct) {
        for (int j = 0; j < i && ok; ++j) ok = z[order[j]] != label;
      }
      for (std::size_t c = 0; c < forced_checks[v].size() && ok; ++c) {
        ok = model.active(label, z[forced_checks[v][c]]);
      }
      if (!ok) continue;
      z[v] = label;
      rec(i + 1);
    }
  };
  rec(0);

  BigInt den;
  if (distinct) {
    den = falling_factorial(n, m);
  } else {
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
  }
  if (altered) den *= BigInt(static_cast<long>(n));
  const Rational w = bigq(BigInt(1), den);
  return fold(g, hist, [&](std::uint32_t, std::uint32_t) -> const Rational& { return w; });
}

MomentValue monte_carlo(const ModelSpec& model, const FactorGraph& g, const MomentOptions& opts) {
  const int m = g.vertex_count;
  std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(g.pairs.size())};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::int64_t> label(1, model.n);
  std::uniform_int_distribution<std::int64_t> lhat_dist(1, model.lhat_range());
  std::vector<double> on, off, in, out;
  for (const auto& f : g.pairs) on.push_back(f.on.get_d()), off.push_back(f.off.get_d());
  for (const auto& f : g.vertices) in.push_back(f.inside.get_d()), out.push_back(f.outside.get_d());
  std::vector<std::int64_t> z(m);
  double sum = 0, sum_sq = 0;
  for (std::uint64_t s = 0; s < opts.mc_samples; ++s) {
    for (int v = 0; v < m; ++v) {
      bool fresh;
      do {
        z[v] = label(rng);
        fresh = model.sampling == Sampling::Independent || std::find(z.begin(), z.begin() + v, z[v]) == z.begin() + v;
      } while (!fresh);
    }
    double value = 1;
    for (std::size_t p = 0; p < g.pairs.size(); ++p) {
      value *= model.active(z[g.pairs[p].a], z[g.pairs[p].b]) ? on[p] : off[p];
    }
    if (!g.vertices.empty()) {
      std::int64_t lhat = lhat_dist(rng);
      for (std::size_t p = 0; p < g.vertices.size(); ++p) {
        value *= model.in_altered_set(lhat, z[g.vertices[p].v]) ? in[p] : out[p];
      }
    }
    sum += value;
    sum_sq += value * value;
  }
  const double count = static_cast<double>(opts.mc_samples);
  const double mean = sum / count;
  const double var = std::max(0.0, sum_sq / count - mean * mean);
  const double scale = g.scale.get_d();
  return MomentValue::monte_carlo(scale * mean, std::abs(scale) * std::sqrt(var / count), opts.mc_samples, opts.seed);
}

MomentValue evaluate_block(const ModelSpec& model, const FactorGraph& g, const MomentOptions& opts) {
  std::optional<Rational> exact;
  switch (model.family) {
    case Family::HS: exact = eval_hs(model, g, opts.budget); break;
    case Family::SBM: exact = eval_sbm(model, g, opts.budget); break;
    case Family::TS: exact = eval_ts(model, g, opts.budget); break;
  }
  if (exact) return MomentValue(Rational(g.scale * *exact));
  if (!opts.allow_monte_carlo) throw CapExceeded("latent enumeration exceeds budget and Monte-Carlo is disabled");
  return monte_carlo(model, g, opts);
}

// Merges factors on the same pair or node, pulls out constants and drops unused nodes.
FactorGraph reduce(const FactorGraph& in) {
  FactorGraph out;
  out.scale = in.scale;
  std::map<Edge, std::pair<Rational, Rational>> pairs;
  for (const auto& f : in.pairs) {
    Edge e{std::min(f.a, f.b), std::max(f.a, f.b)};
    auto [it, inserted] = pairs.emplace(e, std::make_pair(f.off, f.on));
    if (!inserted) {
      it->second.first *= f.off;
      it->second.second *= f.on;
    }
  }
  std::map<int, std::pair<Rational, Rational>> verts;
  for (const auto& f : in.vertices) {
    auto [it, inserted] = verts.emplace(f.v, std::make_pair(f.outside, f.inside));
    if (!inserted) {
      it->second.first *= f.outside;
      it->second.second *= f.inside;
    }
  }
  std::vector<int> id(in.vertex_count, -1);
  auto touch = [&](int v) {
    if (id[v] < 0) id[v] = out.vertex_count++;
    return id[v];
  };
  for (const auto& [e, f] : pairs) {
    if (f.first == f.second) {
      out.scale *= f.first;
      continue;
    }
    out.pairs.push_back({e.first, e.second, f.first, f.second});
  }
  for (const auto& [v, f] : verts) {
    if (f.first == f.second) {
      out.scale *= f.first;
      continue;
    }
    out.vertices.push_back({v, f.first, f.second});
  }
  if (out.scale == 0) {
    out.pairs.clear();
    out.vertices.clear();
    return out;
  }
  for (auto& f : out.pairs) {
    f.a = touch(f.a);
    f.b = touch(f.b);
  }
  for (auto& f : out.vertices) f.v = touch(f.v);
  return out;
}

std::vector<FactorGraph> split(const FactorGraph& g) {
  std::vector<int> parent(g.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : g.pairs) parent[find(f.a)] = find(f.b);
  std::vector<int> comp(g.vertex_count, -1), local(g.vertex_count, -1);
  std::vector<FactorGraph> out;
  for (int v = 0; v < g.vertex_count; ++v) {
    int r = find(v);
    if (comp[r] < 0) {
      comp[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    comp[v] = comp[r];
    local[v] = out[comp[v]].vertex_count++;
  }
  for (const auto& f : g.pairs) out[comp[f.a]].pairs.push_back({local[f.a], local[f.b], f.off, f.on});
  for (const auto& f : g.vertices) out[comp[f.v]].vertices.push_back({local[f.v], f.outside, f.inside});
  return out;
}

}  // namespace

FactorGraph monomial_factors(const ModelSpec& model, int vertex_count, const std::map<Edge, int>& multiplicity) {
  FactorGraph g;
  g.vertex_count = vertex_count;
  for (const auto& [e, mult] : multiplicity) {
    if (mult == 1) {
      g.pairs.push_back({e.first, e.second, Rational(0), model.lambda});
    } else if (mult == 2) {
      g.pairs.push_back({e.first, e.second, model.qbar(), model.pbar()});
    } else if (mult != 0) {
      throw ValidationError("edge multiplicity above 2 is not supported");
    }
  }
  return g;
}

MomentValue expect(const ModelSpec& model, const FactorGraph& graph, const MomentOptions& opts) {
  if (model.sampling == Sampling::Permutation && graph.vertex_count > model.n) {
    throw ValidationError("more involved nodes than labels under permutation sampling");
  }
  FactorGraph g = reduce(graph);
  if (g.scale == 0) return MomentValue(Rational(0));
  if (g.vertex_count == 0) return MomentValue(g.scale);
  // A shared lhat couples all nodes unless the erased set depends on z alone.
  const bool separable = model.sampling == Sampling::Independent && (g.vertices.empty() || model.family == Family::HS);
  if (!separable) return evaluate_block(model, g, opts);
  MomentValue out(g.scale);
  for (auto& part : split(g)) {
    out *= evaluate_block(model, part, opts);
    if (out.is_exact() && out.exact() == 0) break;
  }
  return out;
}

}  // namespace ldgram::detail
