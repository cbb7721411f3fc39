#include "ldgram/mc_oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "ldgram/errors.hpp"
#include "ldgram/moments.hpp"
#include "ldgram/parallel.hpp"

namespace ldgram {

namespace {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Template restricted to one component, relabeled 0..|C|-1.
Template component_shape(const Template& t, const std::vector<int>& comp) {
  std::vector<int> local(t.vertex_count, -1);
  for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
  Template out;
  out.vertex_count = static_cast<int>(comp.size());
  for (auto [a, b] : t.edges) {
    if (local[a] >= 0) out.edges.emplace_back(local[a], local[b]);
  }
  return out;
}

constexpr std::uint64_t kChunk = 1024;

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  explicit Accumulator(std::size_t size = 0) : sum(size, 0.0), sum_sq(size, 0.0) {}
  void add(std::size_t i, double v) {
    sum[i] += v;
    sum_sq[i] += v * v;
  }
};

// Runs `draw` on every sample, chunk by chunk, and reduces chunk sums in order,
// so the result does not depend on the thread count.
std::vector<MomentValue> run_chunks(std::size_t width, const McOptions& opts,
                                    const std::function<void(std::uint64_t, Accumulator&)>& draw) {
  if (opts.samples == 0) throw ValidationError("samples must be positive");
  const std::uint64_t chunks = (opts.samples + kChunk - 1) / kChunk;
  std::vector<Accumulator> parts(chunks, Accumulator(width));
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk, end = std::min<std::uint64_t>(opts.samples, begin + kChunk);
    for (std::uint64_t s = begin; s < end; ++s) draw(s, parts[c]);
  });
  Accumulator total(width);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < width; ++i) {
      total.sum[i] += p.sum[i];
      total.sum_sq[i] += p.sum_sq[i];
    }
  }
  const double count = static_cast<double>(opts.samples);
  std::vector<MomentValue> out;
  for (std::size_t i = 0; i < width; ++i) {
    double mean = total.sum[i] / count;
    double var = std::max(0.0, total.sum_sq[i] / count - mean * mean);
    out.push_back(MomentValue::monte_carlo(mean, std::sqrt(var / count), opts.samples, opts.seed));
  }
  return out;
}

void check_oracle_caps(const ModelSpec& model) {
  if (model.n > kMaxOracleN) throw CapExceeded("Monte-Carlo oracle is limited to n <= " + std::to_string(kMaxOracleN));
}

}  // namespace

Instance sample_instance(const ModelSpec& model, const std::optional<AlterationSpec>& alt, std::uint64_t seed,
                         std::uint64_t stream) {
  model.validate();
  auto rng = stream_rng(seed, stream);
  const std::int64_t n = model.n;
  Instance inst;
  inst.n = n;
  inst.z.resize(n);
  if (model.sampling == Sampling::Independent) {
    std::uniform_int_distribution<std::int64_t> label(1, n);
    for (auto& zi : inst.z) zi = label(rng);
  } else {
    for (std::int64_t i = 0; i < n; ++i) inst.z[i] = i + 1;
    for (std::int64_t i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<std::int64_t> pick(0, i);
      std::swap(inst.z[i], inst.z[pick(rng)]);
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (alt) {
    alt->validate();
    std::uniform_int_distribution<std::int64_t> lhat_dist(1, model.lhat_range());
    const std::int64_t lhat = lhat_dist(rng);
    const double eps = alt->epsilon.get_d();
    inst.erased.resize(n);
    for (std::int64_t i = 0; i < n; ++i) {
      bool candidate = model.in_altered_set(lhat, inst.z[i]);
      double u = unit(rng);
      inst.erased[i] = candidate && u < eps;
    }
  }
  const double q = model.q.get_d();
  const double lambda = model.lambda.get_d();
  inst.y.assign(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      bool erased = alt && (inst.erased[i] || inst.erased[j]);
      double p = q + ((!erased && model.active(inst.z[i], inst.z[j])) ? lambda : 0.0);
      double y = (unit(rng) < p ? 1.0 : 0.0) - q;
      inst.y[i * n + j] = inst.y[j * n + i] = y;
    }
  }
  return inst;
}

PsiEvaluator::PsiEvaluator(const Template& t, const ModelSpec& model) : shape_(t), n_(model.n) {
  check_oracle_caps(model);
  if (t.vertex_count > kMaxOracleVertices) {
    throw CapExceeded("Monte-Carlo oracle is limited to templates with <= 6 vertices");
  }
  const auto comps = nontrivial_components(t);
  std::vector<double> mean;
  MomentOptions exact_only;
  exact_only.allow_monte_carlo = false;
  for (const auto& comp : comps) {
    mean.push_back(raw_moment(model, LabeledGraph::identity(component_shape(t, comp)), exact_only).value());
  }
  std::vector<char> is_root(t.vertex_count, 0);
  if (t.roots) is_root[t.roots->first] = is_root[t.roots->second] = 1;
  const std::int64_t pinned = t.rooted() ? 2 : 0;
  for (std::uint64_t removed = 0; removed < (std::uint64_t{1} << comps.size()); ++removed) {
    Term term;
    term.coefficient = (std::popcount(removed) % 2) ? -1.0 : 1.0;
    std::vector<char> kept(t.vertex_count, 0);
    std::int64_t free_removed = 0;
    for (std::size_t l = 0; l < comps.size(); ++l) {
      for (int v : comps[l]) {
        if (removed >> l & 1) {
          free_removed += !is_root[v];
        } else {
          kept[v] = 1;
        }
      }
      if (removed >> l & 1) term.coefficient *= mean[l];
    }
    for (auto [a, b] : t.edges) {
      if (kept[a]) term.edges.emplace_back(a, b);
    }
    for (int v = 0; v < t.vertex_count; ++v) {
      if (kept[v] && !is_root[v]) term.free_vertices.push_back(v);
    }
    const std::int64_t assigned = pinned + static_cast<std::int64_t>(term.free_vertices.size());
    term.coefficient *= falling_factorial(n_ - assigned, free_removed).get_d();
    terms_.push_back(std::move(term));
  }
  scale_ = t.empty() ? 1.0 : 1.0 / std::sqrt(variance_proxy(t, model).get_d());
}

namespace {

// Sum over injective placements of the free vertices of the product of Y over edges.
double injective_sum(const Instance& inst, const Template& shape, const std::vector<Edge>& edges,
                     const std::vector<int>& free_vertices) {
  const int v = shape.vertex_count;
  std::vector<int> label(v, -1);
  std::uint32_t used = 0;
  if (shape.roots) {
    label[shape.roots->first] = 0;
    label[shape.roots->second] = 1;
    used = 0b11;
  }
  std::vector<int> position(v, -1);
  for (std::size_t i = 0; i < free_vertices.size(); ++i) position[free_vertices[i]] = static_cast<int>(i);
  double fixed = 1.0;
  std::vector<std::vector<int>> partners(free_vertices.size());
  for (auto [a, b] : edges) {
    if (position[a] < 0 && position[b] < 0) {
      fixed *= inst.at(label[a], label[b]);
    } else if (position[a] > position[b]) {
      partners[position[a]].push_back(b);
    } else {
      partners[position[b]].push_back(a);
    }
  }
  const int n = static_cast<int>(inst.n);
  const std::size_t depth = free_vertices.size();
  double total = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t p, double prod) {
    if (p == depth) {
      total += prod;
      return;
    }
    const int vertex = free_vertices[p];
    for (int l = 0; l < n; ++l) {
      if (used >> l & 1) continue;
      double f = prod;
      for (int u : partners[p]) f *= inst.y[static_cast<std::size_t>(l) * n + label[u]];
      if (f == 0.0) continue;
      used |= 1u << l;
      label[vertex] = l;
      rec(p + 1, f);
      used &= ~(1u << l);
    }
    label[vertex] = -1;
  };
  rec(0, fixed);
  return total;
}

}  // namespace

double PsiEvaluator::centered(const Instance& inst) const {
  double total = 0.0;
  for (const auto& term : terms_) {
    if (term.coefficient == 0.0) continue;
    total += term.coefficient * injective_sum(inst, shape_, term.edges, term.free_vertices);
  }
  return total;
}

double PsiEvaluator::raw(const Instance& inst) const {
  std::vector<int> free_vertices;
  for (int v = 0; v < shape_.vertex_count; ++v) {
    if (!shape_.roots || (v != shape_.roots->first && v != shape_.roots->second)) free_vertices.push_back(v);
  }
  return injective_sum(inst, shape_, shape_.edges, free_vertices);
}

double PsiEvaluator::operator()(const Instance& inst) const { return scale_ * centered(inst); }

double evaluate_psi(const Template& t, const Instance& inst, const ModelSpec& model) {
  return PsiEvaluator(t, model)(inst);
}

McGram estimate_gram(int D, const ModelSpec& model, bool rooted, const McOptions& opts) {
  check_oracle_caps(model);
  McGram out;
  if (D > 0) out.templates = rooted ? enumerate_rooted_templates(D) : enumerate_templates(D);
  std::vector<PsiEvaluator> psi;
  for (const auto& t : out.templates) psi.emplace_back(t, model);
  const std::size_t N = out.size();
  auto values = run_chunks(N * N, opts, [&](std::uint64_t s, Accumulator& acc) {
    Instance inst = sample_instance(model, std::nullopt, opts.seed, s);
    std::vector<double> v(N, 1.0);
    for (std::size_t i = 1; i < N; ++i) v[i] = psi[i - 1](inst);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i; j < N; ++j) acc.add(i * N + j, v[i] * v[j]);
    }
  });
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < i; ++j) values[i * N + j] = values[j * N + i];
  }
  out.entries = std::move(values);
  return out;
}

std::vector<MomentValue> estimate_h1_means(int D, const ModelSpec& model, const AlterationSpec& alt,
                                           const McOptions& opts) {
  check_oracle_caps(model);
  std::vector<Template> templates;
  if (D > 0) templates = enumerate_templates(D);
  std::vector<PsiEvaluator> psi;
  for (const auto& t : templates) psi.emplace_back(t, model);
  return run_chunks(templates.size() + 1, opts, [&](std::uint64_t s, Accumulator& acc) {
    Instance inst = sample_instance(model, alt, opts.seed, s);
    acc.add(0, 1.0);
    for (std::size_t i = 0; i < psi.size(); ++i) acc.add(i + 1, psi[i](inst));
  });
}

std::vector<MomentValue> estimate_corr_vector(int D, const ModelSpec& model, const McOptions& opts) {
  check_oracle_caps(model);
  std::vector<Template> templates;
  if (D > 0) templates = enumerate_rooted_templates(D);
  std::vector<PsiEvaluator> psi;
  for (const auto& t : templates) psi.emplace_back(t, model);
  const bool signal = model.lambda > 0;
  return run_chunks(templates.size() + 1, opts, [&](std::uint64_t s, Accumulator& acc) {
    Instance inst = sample_instance(model, std::nullopt, opts.seed, s);
    const double x = (signal && model.active(inst.z[0], inst.z[1])) ? 1.0 : 0.0;
    acc.add(0, x);
    for (std::size_t i = 0; i < psi.size(); ++i) acc.add(i + 1, x == 0.0 ? 0.0 : psi[i](inst));
  });
}

double Comparison::z() const {
  const double diff = empirical - analytic;
  const double se = std::sqrt(std_error * std_error + analytic_std_error * analytic_std_error);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / se;
}

std::vector<Comparison> cross_validate(int D, const ModelSpec& model, const AlterationSpec& alt,
                                       const McOptions& mc, const GramOptions& gram) {
  std::vector<Comparison> out;
  auto matrix = [&](const char* name, bool rooted) {
    const GramMatrix exact = gram_matrix(D, model, rooted, gram);
    const McGram empirical = estimate_gram(D, model, rooted, mc);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      for (std::size_t j = i; j < exact.size(); ++j) {
        out.push_back({name, i, j, static_cast<double>(exact.entry(i, j)), exact.std_error(i, j),
                       empirical.at(i, j).value(), empirical.at(i, j).std_error()});
      }
    }
  };
  auto vector = [&](const char* name, const std::vector<GramEntry>& exact, const std::vector<MomentValue>& emp) {
    for (std::size_t i = 0; i < exact.size(); ++i) {
      out.push_back({name, i, 0, exact[i].value(), exact[i].std_error(), emp[i].value(), emp[i].std_error()});
    }
  };
  matrix("gram", false);
  const auto templates = D > 0 ? enumerate_templates(D) : std::vector<Template>{};
  vector("h1_mean", altered_means(templates, model, alt, gram), estimate_h1_means(D, model, alt, mc));
  matrix("gram_rooted", true);
  const auto rooted = D > 0 ? enumerate_rooted_templates(D) : std::vector<Template>{};
  vector("x_corr", x_correlation_vector(rooted, model, gram), estimate_corr_vector(D, model, mc));
  return out;
}

}  // namespace ldgram
