#include "ldgram/analysis.hpp"

#include <algorithm>

#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

void require_symmetric(const HighMatrix& g) {
  if (g.rows() != g.cols()) throw ValidationError("Gram matrix is not square");
  const HighFloat tol = HighFloat("1e-35");
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      HighFloat scale = std::max<HighFloat>(HighFloat(1), std::max(abs(g(i, j)), abs(g(j, i))));
      if (abs(g(i, j) - g(j, i)) > tol * scale) throw ValidationError("Gram matrix is not symmetric");
    }
  }
}

HighMatrix identity_like(const HighMatrix& g) { return HighMatrix::Identity(g.rows(), g.cols()); }

// Solves gamma * alpha = v and returns (v . alpha, alpha).
std::pair<HighFloat, HighVector> quadratic_form(const HighMatrix& gamma, const HighVector& v, const Deviation& dev) {
  if (dev.exact_eig >= 1.0) {
    throw SingularGram("operator-norm deviation " + std::to_string(dev.exact_eig) + " >= 1; refusing to invert");
  }
  Eigen::LLT<HighMatrix> llt(gamma);
  if (llt.info() != Eigen::Success) throw SingularGram("Cholesky factorization failed");
  HighVector alpha = llt.solve(v);
  return {v.dot(alpha), alpha};
}

HighVector as_vector(const std::vector<GramEntry>& entries) {
  HighVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i].high_value();
  return v;
}

LDReport base_report(const GramMatrix& gram, const Deviation& dev) {
  LDReport r;
  r.D = gram.D;
  r.op_norm_deviation = dev.exact_eig;
  r.l1_row_bound = dev.l1_bound;
  for (const auto& t : gram.templates) r.templates.push_back(t.to_string());
  return r;
}

}  // namespace

std::vector<HighFloat> eigenvalues(const HighMatrix& gamma) {
  require_symmetric(gamma);
  if (gamma.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<HighMatrix> solver(gamma, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  std::vector<HighFloat> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  std::sort(out.begin(), out.end());
  return out;
}

Deviation operator_norm_deviation(const HighMatrix& gamma) {
  HighMatrix diff = gamma - identity_like(gamma);
  Deviation d;
  HighFloat worst = 0, row_max = 0;
  for (const auto& e : eigenvalues(diff)) worst = std::max<HighFloat>(worst, abs(e));
  for (Eigen::Index i = 0; i < diff.rows(); ++i) {
    HighFloat row = 0;
    for (Eigen::Index j = 0; j < diff.cols(); ++j) row += abs(diff(i, j));
    row_max = std::max(row_max, row);
  }
  d.exact_eig = worst.convert_to<double>();
  d.l1_bound = row_max.convert_to<double>();
  return d;
}

Deviation operator_norm_deviation(const GramMatrix& gram) { return operator_norm_deviation(gram.normalized()); }

LDReport advantage_from(const GramMatrix& gram, const std::vector<GramEntry>& altered) {
  if (altered.size() != gram.size()) throw ValidationError("altered mean vector does not match the Gram size");
  HighMatrix gamma = gram.normalized();
  Deviation dev = operator_norm_deviation(gamma);
  HighVector m = as_vector(altered);
  auto [value, alpha] = quadratic_form(gamma, m, dev);
  LDReport r = base_report(gram, dev);
  r.adv_squared = value;
  r.adv_exact = sqrt(value).convert_to<double>();
  HighFloat bound2 = m.squaredNorm() / ((1 - HighFloat(dev.exact_eig)) * (1 - HighFloat(dev.exact_eig)));
  r.adv_orthonormal_bound = sqrt(bound2).convert_to<double>();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) r.optimal_coefficients.push_back(alpha(i).convert_to<double>());
  return r;
}

LDReport correlation_from(const GramMatrix& rooted_gram, const std::vector<GramEntry>& xvec) {
  if (xvec.size() != rooted_gram.size()) throw ValidationError("correlation vector does not match the Gram size");
  HighMatrix gamma = rooted_gram.normalized();
  Deviation dev = operator_norm_deviation(gamma);
  HighVector c = as_vector(xvec);
  auto [value, alpha] = quadratic_form(gamma, c, dev);
  LDReport r = base_report(rooted_gram, dev);
  r.corr_squared = value;
  r.corr_exact = sqrt(value).convert_to<double>();
  r.corr_orthonormal_approx = sqrt(c.squaredNorm()).convert_to<double>();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) r.optimal_coefficients.push_back(alpha(i).convert_to<double>());
  return r;
}

LDReport advantage(int D, const ModelSpec& model, const std::optional<AlterationSpec>& alt,
                   const GramOptions& opts) {
  GramMatrix gram = gram_matrix(D, model, false, opts);
  if (alt) return advantage_from(gram, altered_means(gram.templates, model, *alt, opts));
  std::vector<GramEntry> means(gram.size());
  means[0].scalar = MomentValue(Rational(1));
  for (std::size_t i = 1; i < gram.size(); ++i) {
    means[i].scalar = gram.scalar(0, i);
    means[i].norm_2 = gram.variance[i];
  }
  return advantage_from(gram, means);
}

LDReport correlation(int D, const ModelSpec& model, const GramOptions& opts) {
  GramMatrix gram = gram_matrix(D, model, true, opts);
  return correlation_from(gram, x_correlation_vector(gram.templates, model, opts));
}

}  // namespace ldgram
