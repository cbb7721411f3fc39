#include "ldgram/moments.hpp"

#include <bit>
#include <map>

#include "expectation.hpp"
#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

using detail::FactorGraph;

struct LabelSpace {
  std::map<std::int64_t, int> id;
  int add(std::int64_t label) { return id.emplace(label, static_cast<int>(id.size())).first->second; }
  int size() const { return static_cast<int>(id.size()); }
};

using Piece = std::vector<Edge>;

std::vector<Piece> pieces(const LabeledGraph& g, LabelSpace& space) {
  std::vector<Piece> out;
  for (const auto& comp : nontrivial_components(g.shape)) {
    std::vector<char> inside(g.shape.vertex_count, 0);
    for (int v : comp) inside[v] = 1;
    Piece p;
    for (auto [a, b] : g.shape.edges) {
      if (inside[a]) p.emplace_back(space.add(g.labels[a]), space.add(g.labels[b]));
    }
    out.push_back(std::move(p));
  }
  return out;
}

void add_edges(std::map<Edge, int>& mult, const Piece& p) {
  for (auto [a, b] : p) ++mult[{std::min(a, b), std::max(a, b)}];
}

struct Extras {
  const AlterationSpec* alt = nullptr;
  int root1 = -1;  // x factor between these local ids when set
  int root2 = -1;
};

MomentValue raw_of(const ModelSpec& model, int vertex_count, const std::map<Edge, int>& mult, const Extras& extras,
                   const MomentOptions& opts) {
  FactorGraph fg = detail::monomial_factors(model, vertex_count, mult);
  if (extras.root1 >= 0) {
    fg.pairs.push_back({extras.root1, extras.root2, Rational(0), Rational(model.lambda > 0 ? 1 : 0)});
  }
  if (extras.alt) {
    std::vector<char> touched(vertex_count, 0);
    for (const auto& [e, m] : mult) touched[e.first] = touched[e.second] = 1;
    for (int v = 0; v < vertex_count; ++v) {
      if (touched[v]) fg.vertices.push_back({v, Rational(1), Rational(1 - extras.alt->epsilon)});
    }
  }
  return detail::expect(model, fg, opts);
}

// Inclusion-exclusion over component subsets: prod (P_l - c_l) expanded, with
// c_l the H0 mean of component l.
MomentValue centered(const ModelSpec& model, int vertex_count, const std::vector<Piece>& side1,
                     const std::vector<Piece>& side2, const Extras& extras, const MomentOptions& opts) {
  const std::size_t c1 = side1.size(), c2 = side2.size();
  if (c1 + c2 > 20) throw CapExceeded("too many components for inclusion-exclusion");
  std::vector<MomentValue> single;
  for (const auto* side : {&side1, &side2}) {
    for (const auto& piece : *side) {
      std::map<Edge, int> mult;
      add_edges(mult, piece);
      single.push_back(raw_of(model, vertex_count, mult, Extras{}, opts));
    }
  }
  MomentValue total(Rational(0));
  const std::uint64_t all = std::uint64_t{1} << (c1 + c2);
  for (std::uint64_t removed = 0; removed < all; ++removed) {
    MomentValue coef(Rational(1));
    std::map<Edge, int> mult;
    bool zero = false;
    for (std::size_t l = 0; l < c1 + c2; ++l) {
      if (removed >> l & 1) {
        coef *= single[l];
        if (coef.is_exact() && coef.exact() == 0) zero = true;
      } else {
        add_edges(mult, l < c1 ? side1[l] : side2[l - c1]);
      }
    }
    if (zero) continue;
    MomentValue term = coef * raw_of(model, vertex_count, mult, extras, opts);
    total = (std::popcount(removed) % 2 == 0) ? total + term : total - term;
  }
  return total;
}

}  // namespace

MomentValue raw_moment(const ModelSpec& model, const LabeledGraph& g, const MomentOptions& opts) {
  validate_labeling(g, model.n);
  LabelSpace space;
  std::map<Edge, int> mult;
  for (auto [a, b] : g.shape.edges) {
    int x = space.add(g.labels[a]), y = space.add(g.labels[b]);
    ++mult[{std::min(x, y), std::max(x, y)}];
  }
  return raw_of(model, space.size(), mult, Extras{}, opts);
}

MomentValue raw_product_moment(const ModelSpec& model, const LabeledGraph& g1, const LabeledGraph& g2,
                               const MomentOptions& opts) {
  validate_labeling(g1, model.n);
  validate_labeling(g2, model.n);
  LabelSpace space;
  std::map<Edge, int> mult;
  for (const auto* g : {&g1, &g2}) {
    for (auto [a, b] : g->shape.edges) {
      int x = space.add(g->labels[a]), y = space.add(g->labels[b]);
      ++mult[{std::min(x, y), std::max(x, y)}];
    }
  }
  return raw_of(model, space.size(), mult, Extras{}, opts);
}

MomentValue centered_product_moment(const ModelSpec& model, const LabeledGraph& g1, const LabeledGraph& g2,
                                    const MomentOptions& opts) {
  validate_labeling(g1, model.n);
  validate_labeling(g2, model.n);
  LabelSpace space;
  auto side1 = pieces(g1, space);
  auto side2 = pieces(g2, space);
  return centered(model, space.size(), side1, side2, Extras{}, opts);
}

MomentValue centered_moment(const ModelSpec& model, const LabeledGraph& g, const MomentOptions& opts) {
  validate_labeling(g, model.n);
  LabelSpace space;
  auto side = pieces(g, space);
  return centered(model, space.size(), side, {}, Extras{}, opts);
}

MomentValue altered_centered_mean(const ModelSpec& model, const AlterationSpec& alt, const LabeledGraph& g,
                                  const MomentOptions& opts) {
  alt.validate();
  validate_labeling(g, model.n);
  LabelSpace space;
  auto side = pieces(g, space);
  Extras extras;
  extras.alt = &alt;
  return centered(model, space.size(), side, {}, extras, opts);
}

MomentValue x_mean(const ModelSpec& model, const MomentOptions& opts) {
  if (model.n < 2) throw ValidationError("x needs n >= 2");
  FactorGraph fg;
  fg.vertex_count = 2;
  fg.pairs.push_back({0, 1, Rational(0), Rational(model.lambda > 0 ? 1 : 0)});
  return detail::expect(model, fg, opts);
}

MomentValue x_weighted_centered_moment(const ModelSpec& model, const LabeledGraph& g, const MomentOptions& opts) {
  if (!g.shape.rooted()) throw ValidationError("x-weighted moments need a rooted template");
  validate_labeling(g, model.n);
  LabelSpace space;
  Extras extras;
  extras.root1 = space.add(1);
  extras.root2 = space.add(2);
  auto side = pieces(g, space);
  return centered(model, space.size(), side, {}, extras, opts);
}

}  // namespace ldgram
