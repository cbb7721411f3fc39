#include "ldgram/basis.hpp"

#include "ldgram/errors.hpp"
#include "ldgram/matchings.hpp"
#include "ldgram/parallel.hpp"

namespace ldgram {

HighFloat to_high(const Rational& value) {
  return HighFloat(value.get_num().get_str()) / HighFloat(value.get_den().get_str());
}

namespace {

BigInt labelings(const Template& t, std::int64_t n) {
  if (n < t.vertex_count) throw ValidationError("n=" + std::to_string(n) + " is smaller than |V|");
  return t.rooted() ? falling_factorial(n - 2, t.vertex_count - 2) : falling_factorial(n, t.vertex_count);
}

}  // namespace

Rational variance_proxy(const Template& t, const ModelSpec& model) {
  Rational out(labelings(t, model.n) * BigInt(static_cast<unsigned long>(automorphism_count(t))));
  return out * rational_pow(model.qbar(), static_cast<unsigned>(t.edge_count()));
}

BasisElement BasisElement::make(const Template& t, const ModelSpec& model) {
  return BasisElement{t, variance_proxy(t, model)};
}

HighFloat GramEntry::high_value() const {
  HighFloat s = scalar.is_exact() ? to_high(scalar.exact()) : HighFloat(scalar.value());
  return s / boost::multiprecision::sqrt(to_high(norm_1) * to_high(norm_2));
}

double GramEntry::value() const { return high_value().convert_to<double>(); }

double GramEntry::std_error() const {
  return scalar.std_error() / std::sqrt((to_high(norm_1) * to_high(norm_2)).convert_to<double>());
}

GramEntry gram_entry(const Template& g1, const Template& g2, const ModelSpec& model, const GramOptions& opts) {
  if (g1.rooted() != g2.rooted()) throw ValidationError("cannot mix rooted and unrooted templates");
  const bool skip = opts.skip_non_star && model.sampling == Sampling::Independent;
  GramEntry out;
  out.scalar = MomentValue(Rational(0));
  out.perfect_scalar = MomentValue(Rational(0));
  for (const auto& orbit : matching_orbits(g1, g2)) {
    const Matching& m = orbit.representative;
    const std::int64_t merged = g1.vertex_count + g2.vertex_count - static_cast<std::int64_t>(m.size());
    if (merged > model.n) continue;
    MergeResult mr = classify(g1, g2, m);
    if (skip && mr.cc_pure > 0) continue;
    auto [a, b] = labeled_pair(g1, g2, mr);
    MomentValue e = centered_product_moment(model, a, b, opts.moments);
    if (e.is_exact() && e.exact() == 0) continue;
    BigInt weight = labeling_count(g1, g2, m, model.n) * BigInt(static_cast<unsigned long>(orbit.size));
    MomentValue contribution = e * MomentValue(Rational(weight));
    out.scalar += contribution;
    if (mr.perfect()) out.perfect_scalar += contribution;
  }
  out.norm_1 = variance_proxy(g1, model);
  out.norm_2 = variance_proxy(g2, model);
  return out;
}

GramEntry border_entry(const Template& g, const ModelSpec& model, const GramOptions& opts) {
  GramEntry out;
  MomentValue e = centered_moment(model, LabeledGraph::identity(g), opts.moments);
  out.scalar = e * MomentValue(Rational(labelings(g, model.n)));
  out.perfect_scalar = MomentValue(Rational(0));
  out.norm_1 = 1;
  out.norm_2 = variance_proxy(g, model);
  return out;
}

bool GramMatrix::exact() const {
  for (const auto& s : scalars) {
    if (!s.is_exact()) return false;
  }
  return true;
}

HighFloat GramMatrix::entry(std::size_t i, std::size_t j) const {
  const MomentValue& s = scalar(i, j);
  HighFloat num = s.is_exact() ? to_high(s.exact()) : HighFloat(s.value());
  return num / boost::multiprecision::sqrt(to_high(variance[i]) * to_high(variance[j]));
}

double GramMatrix::std_error(std::size_t i, std::size_t j) const {
  return scalar(i, j).std_error() / std::sqrt((to_high(variance[i]) * to_high(variance[j])).convert_to<double>());
}

HighMatrix GramMatrix::normalized() const {
  const auto N = static_cast<Eigen::Index>(size());
  HighMatrix out(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) out(i, j) = entry(i, j);
  }
  return out;
}

GramMatrix gram_matrix(int D, const ModelSpec& model, bool rooted, const GramOptions& opts,
                       const EnumerationCaps& caps) {
  model.validate();
  GramMatrix g;
  g.model = model;
  g.D = D;
  g.rooted = rooted;
  if (D > 0) g.templates = rooted ? enumerate_rooted_templates(D, caps) : enumerate_templates(D, caps);
  const std::size_t N = g.templates.size() + 1;
  g.variance.assign(N, Rational(1));
  for (std::size_t i = 1; i < N; ++i) g.variance[i] = variance_proxy(g.templates[i - 1], model);
  g.scalars.assign(N * N, MomentValue(Rational(0)));
  g.scalars[0] = MomentValue(Rational(1));

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = std::max<std::size_t>(i, 1); j < N; ++j) tasks.emplace_back(i, j);
  }
  std::vector<MomentValue> results(tasks.size());
  parallel_for(tasks.size(), opts.threads, [&](std::size_t t) {
    auto [i, j] = tasks[t];
    if (i == 0) {
      results[t] = border_entry(g.templates[j - 1], model, opts).scalar;
    } else {
      results[t] = gram_entry(g.templates[i - 1], g.templates[j - 1], model, opts).scalar;
    }
  });
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    auto [i, j] = tasks[t];
    g.scalars[i * N + j] = results[t];
    g.scalars[j * N + i] = results[t];
  }
  return g;
}

std::vector<GramEntry> altered_means(const std::vector<Template>& templates, const ModelSpec& model,
                                     const AlterationSpec& alt, const GramOptions& opts) {
  std::vector<GramEntry> out(templates.size() + 1);
  out[0].scalar = MomentValue(Rational(1));
  parallel_for(templates.size(), opts.threads, [&](std::size_t i) {
    const Template& t = templates[i];
    MomentValue e = altered_centered_mean(model, alt, LabeledGraph::identity(t), opts.moments);
    out[i + 1].scalar = e * MomentValue(Rational(labelings(t, model.n)));
    out[i + 1].norm_2 = variance_proxy(t, model);
  });
  return out;
}

std::vector<GramEntry> x_correlation_vector(const std::vector<Template>& templates, const ModelSpec& model,
                                            const GramOptions& opts) {
  std::vector<GramEntry> out(templates.size() + 1);
  out[0].scalar = x_mean(model, opts.moments);
  parallel_for(templates.size(), opts.threads, [&](std::size_t i) {
    const Template& t = templates[i];
    if (!t.rooted()) throw ValidationError("correlation vector needs rooted templates");
    MomentValue e = x_weighted_centered_moment(model, LabeledGraph::identity(t), opts.moments);
    out[i + 1].scalar = e * MomentValue(Rational(labelings(t, model.n)));
    out[i + 1].norm_2 = variance_proxy(t, model);
  });
  return out;
}

}  // namespace ldgram
