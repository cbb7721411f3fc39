#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "ldgram/analysis.hpp"
#include "ldgram/errors.hpp"
#include "ldgram/matchings.hpp"
#include "ldgram/parallel.hpp"

namespace ldgram {

namespace {

HighFloat power(const HighFloat& base, const Rational& exponent) {
  if (exponent == 0) return HighFloat(1);
  return exp(to_high(exponent) * log(base));
}

HighFloat ipow(const HighFloat& base, int e) {
  HighFloat out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

HighFloat magnitude(const MomentValue& v) {
  return v.is_exact() ? to_high(abs(v.exact())) : HighFloat(std::abs(v.value()));
}

// LHS / RHS with 0/0 read as 0.
HighFloat ratio(const HighFloat& lhs, const HighFloat& rhs) {
  if (lhs == 0) return 0;
  if (rhs == 0) return std::numeric_limits<HighFloat>::infinity();
  return lhs / rhs;
}

std::string matching_text(const Matching& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    os << (i ? "," : "") << "(" << m.pairs[i].first << "," << m.pairs[i].second << ")";
  }
  os << "]";
  return os.str();
}

struct Worst {
  HighFloat ratio = 0;
  std::string witness;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;

  void offer(const HighFloat& r, const std::function<std::string()>& describe) {
    ++evaluated;
    if (witness.empty() || r > ratio) {
      ratio = r;
      witness = describe();
    }
  }
  void merge(const Worst& o) {
    evaluated += o.evaluated;
    skipped += o.skipped;
    if (!o.witness.empty() && (witness.empty() || o.ratio > ratio)) {
      ratio = o.ratio;
      witness = o.witness;
    }
  }
};

std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::string pair_text(const Template& a, const Template& b, const Matching& m) {
  return "g1=" + a.to_string() + " g2=" + b.to_string() + " matching=" + matching_text(m);
}

// E~[1{A} P1 P2]: labels drawn independently, A = connectivity of the graph
// whose nodes are the pure components of G_delta plus the remaining vertices.
Rational permutation_event_moment(const ModelSpec& model, const MergeResult& mr) {
  const int m = mr.union_vertex_count;
  const std::int64_t n = model.n;
  std::vector<int> group(m, 0);
  int groups = 1;
  for (std::size_t c = 0; c < mr.delta_components.size(); ++c) {
    if (!mr.delta_component_pure[c]) continue;
    for (int v : mr.delta_components[c]) group[v] = groups;
    ++groups;
  }
  const bool has_rest = std::count(group.begin(), group.end(), 0) > 0;
  std::vector<Edge> single, shared;
  for (const auto& [e, mult] : mr.multiplicity) (mult == 1 ? single : shared).push_back(e);
  std::vector<std::vector<int>> checks(m);  // single edges checked at their later endpoint
  for (auto [a, b] : single) checks[std::max(a, b)].push_back(std::min(a, b));

  std::vector<std::uint64_t> hist(shared.size() + 1, 0);
  std::vector<std::int64_t> z(m);
  std::vector<int> parent(groups);
  auto connected = [&] {
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (group[a] != group[b] && z[a] == z[b]) parent[find(group[a])] = find(group[b]);
      }
    }
    int roots = 0;
    for (int g = has_rest ? 0 : 1; g < groups; ++g) roots += find(g) == g;
    return roots == 1;
  };
  std::function<void(int)> rec = [&](int v) {
    if (v == m) {
      if (!connected()) return;
      int active = 0;
      for (auto [a, b] : shared) active += model.active(z[a], z[b]);
      ++hist[active];
      return;
    }
    for (std::int64_t label = 1; label <= n; ++label) {
      z[v] = label;
      bool ok = true;
      for (int u : checks[v]) ok = ok && model.active(z[u], label);
      if (ok) rec(v + 1);
    }
  };
  rec(0);
  Rational total = 0;
  const Rational base = rational_pow(model.lambda, static_cast<unsigned>(single.size()));
  for (std::size_t c = 0; c < hist.size(); ++c) {
    if (!hist[c]) continue;
    total += Rational(BigInt(static_cast<unsigned long>(hist[c]))) * rational_pow(model.pbar(), c) *
             rational_pow(model.qbar(), shared.size() - c);
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
  return base * total / Rational(den);
}

}  // namespace

void ConditionConstants::validate() const {
  for (const Rational* c : {&c_s, &c_m, &c_v1, &c_v2, &c_v3, &c_v4, &c_vd1, &c_vd2}) {
    if (*c < 0) throw ValidationError("condition constants must be non-negative");
  }
  if (c_v4 < 1) throw ValidationError("invariant c_v4 >= 1 violated");
}

ConditionConstants ConditionConstants::defaults_for(Family family, Sampling sampling) {
  ConditionConstants c;
  const bool perm = sampling == Sampling::Permutation;
  if (family == Family::TS) {
    c.c_m = perm ? 2 : 1;
    c.c_v1 = 1;
    c.c_v2 = perm ? 2 : 1;
    c.c_v3 = 1;
    c.c_v4 = 1;
  } else {
    c.c_m = perm ? 1 : 0;
    c.c_v1 = 0;
    c.c_v2 = perm ? 2 : 1;
    c.c_v3 = perm ? 3 : 0;
    c.c_v4 = 1;
  }
  c.c_vd1 = 2;
  c.c_vd2 = 8;
  return c;
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::Signal: return "signal";
    case Condition::Moment: return "moment";
    case Condition::Variance: return "variance";
    case Condition::VariancePermutation: return "variance_permutation";
  }
  return "?";
}

Condition parse_condition(const std::string& text) {
  for (auto c : {Condition::Signal, Condition::Moment, Condition::Variance, Condition::VariancePermutation}) {
    if (text == to_string(c)) return c;
  }
  if (text == "variance-permutation") return Condition::VariancePermutation;
  throw ValidationError("unknown condition '" + text + "'");
}

ConditionReport check_condition(const ModelSpec& model, int D, Condition which, const ConditionConstants& consts,
                                const ConditionOptions& opts) {
  model.validate();
  consts.validate();
  if (D < 1) throw ValidationError("D must be at least 1");
  const HighFloat d = D;
  const HighFloat lambda = to_high(model.lambda);
  const HighFloat density = to_high(Rational(model.k, model.n));
  ConditionReport report;
  report.which = which;
  Worst worst;

  if (which == Condition::Signal) {
    const HighFloat q = to_high(model.q);
    const HighFloat terms[3] = {density, lambda * model.k / sqrt(HighFloat(model.n) * q), lambda / q};
    const char* names[3] = {"k/n", "lambda k/sqrt(n q)", "lambda/q"};
    const HighFloat rhs = power(d, Rational(-8) * consts.c_s);
    for (int i = 0; i < 3; ++i) worst.offer(ratio(terms[i], rhs), [&] { return std::string(names[i]); });
  } else if (which == Condition::Moment) {
    const HighFloat scale = power(d, consts.c_m);
    for (const auto& t : enumerate_templates(D)) {
      if (t.vertex_count > model.n) {
        ++worst.skipped;
        continue;
      }
      HighFloat lhs = magnitude(raw_moment(model, LabeledGraph::identity(t), opts.moments));
      const int cc = static_cast<int>(connected_components(t).size());
      HighFloat rhs = ipow(scale * lambda, t.edge_count()) * ipow(scale * density, t.vertex_count - cc);
      worst.offer(ratio(lhs, rhs), [&] { return "g=" + t.to_string(); });
    }
  } else if (which == Condition::Variance) {
    const auto templates = enumerate_templates(D);
    const auto tasks = unordered_pairs(templates.size());
    const HighFloat scale = power(d, consts.c_v1);
    const HighFloat pbar = to_high(model.pbar());
    std::vector<Worst> parts(tasks.size());
    parallel_for(tasks.size(), opts.threads, [&](std::size_t i) {
      const Template& g1 = templates[tasks[i].first];
      const Template& g2 = templates[tasks[i].second];
      for (const auto& orbit : matching_orbits(g1, g2)) {
        const Matching& m = orbit.representative;
        if (g1.vertex_count + g2.vertex_count - static_cast<std::int64_t>(m.size()) > model.n) {
          ++parts[i].skipped;
          continue;
        }
        MergeResult mr = classify(g1, g2, m);
        if (mr.perfect()) continue;
        auto [a, b] = labeled_pair(g1, g2, mr);
        HighFloat lhs = magnitude(raw_product_moment(model, a, b, opts.moments));
        const int e_delta = static_cast<int>(mr.difference_edges.size());
        const int e_cap = static_cast<int>(mr.intersection_edges.size());
        const int v_delta = static_cast<int>(mr.delta_vertices.size());
        HighFloat rhs = to_high(consts.c_v2) * ipow(scale * lambda, e_delta) * ipow(pbar, e_cap) *
                        ipow(scale * density, v_delta - mr.cc_delta);
        parts[i].offer(ratio(lhs, rhs), [&] { return "part 1: " + pair_text(g1, g2, m); });
      }
    });
    for (const auto& p : parts) worst.merge(p);
    Rational max_dev = 0;
    const HighFloat part2_scale = to_high(consts.c_v3) * power(d, -consts.c_v4);
    for (const auto& t : templates) {
      if (t.vertex_count > model.n) continue;
      auto g = LabeledGraph::identity(t);
      MomentValue second = raw_product_moment(model, g, g, opts.moments);
      const Rational target = rational_pow(model.qbar(), static_cast<unsigned>(t.edge_count()));
      HighFloat dev;
      if (second.is_exact()) {
        Rational exact_dev = abs(second.exact() - target);
        max_dev = std::max(max_dev, exact_dev);
        dev = to_high(exact_dev);
      } else {
        dev = abs(HighFloat(second.value()) - to_high(target));
      }
      worst.offer(ratio(dev, part2_scale * to_high(target)), [&] { return "part 2: g=" + t.to_string(); });
    }
    report.second_moment_deviation = max_dev;
  } else {
    if (model.n > opts.permutation_max_n) {
      throw CapExceeded("variance_permutation check is limited to n <= " + std::to_string(opts.permutation_max_n));
    }
    const auto templates = enumerate_templates(D);
    const auto tasks = unordered_pairs(templates.size());
    const HighFloat dv = power(d, consts.c_vd1);
    const HighFloat cvd2 = to_high(consts.c_vd2);
    const HighFloat pbar = to_high(model.pbar());
    const HighFloat pure_scale = cvd2 * dv / sqrt(HighFloat(model.n));
    std::vector<Worst> parts(tasks.size());
    parallel_for(tasks.size(), opts.threads, [&](std::size_t i) {
      const Template& g1 = templates[tasks[i].first];
      const Template& g2 = templates[tasks[i].second];
      for (const auto& orbit : matching_orbits(g1, g2)) {
        const Matching& m = orbit.representative;
        const std::int64_t merged = g1.vertex_count + g2.vertex_count - static_cast<std::int64_t>(m.size());
        if (merged > model.n || merged > opts.permutation_max_nodes) {
          ++parts[i].skipped;
          continue;
        }
        MergeResult mr = classify(g1, g2, m);
        if (mr.perfect()) continue;
        HighFloat lhs = to_high(abs(permutation_event_moment(model, mr)));
        const int e_delta = static_cast<int>(mr.difference_edges.size());
        const int e_cap = static_cast<int>(mr.intersection_edges.size());
        const int v_delta = static_cast<int>(mr.delta_vertices.size());
        HighFloat rhs = cvd2 * dv * ipow(dv * lambda, e_delta) * ipow(pbar, e_cap) *
                        ipow(dv * density, v_delta - mr.cc_delta) * ipow(pure_scale, mr.cc_pure);
        parts[i].offer(ratio(lhs, rhs), [&] { return pair_text(g1, g2, m); });
      }
    });
    for (const auto& p : parts) worst.merge(p);
  }

  report.worst_ratio = worst.ratio.convert_to<double>();
  report.holds = worst.ratio <= 1;
  report.witness = worst.witness;
  report.evaluated = worst.evaluated;
  report.skipped = worst.skipped;
  return report;
}

}  // namespace ldgram
