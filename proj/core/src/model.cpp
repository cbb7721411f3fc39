#include "ldgram/model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "ldgram/errors.hpp"

namespace ldgram {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::HS: return "hs";
    case Family::SBM: return "sbm";
    case Family::TS: return "ts";
  }
  return "?";
}

std::string to_string(Sampling s) { return s == Sampling::Independent ? "independent" : "permutation"; }

Family parse_family(const std::string& text) {
  auto t = lower(text);
  if (t == "hs") return Family::HS;
  if (t == "sbm") return Family::SBM;
  if (t == "ts") return Family::TS;
  throw ValidationError("unknown family '" + text + "' (expected hs, sbm or ts)");
}

Sampling parse_sampling(const std::string& text) {
  auto t = lower(text);
  if (t == "independent" || t == "i") return Sampling::Independent;
  if (t == "permutation" || t == "p") return Sampling::Permutation;
  throw ValidationError("unknown sampling '" + text + "' (expected independent or permutation)");
}

ModelSpec ModelSpec::make(Family family, Sampling sampling, std::int64_t n, std::int64_t k, Rational q,
                          Rational lambda) {
  ModelSpec m;
  m.family = family;
  m.sampling = sampling;
  m.n = n;
  m.k = k;
  m.q = std::move(q);
  m.lambda = std::move(lambda);
  m.validate();
  return m;
}

void ModelSpec::validate() const {
  if (n < 1) throw ValidationError("invariant n >= 1 violated");
  if (k < 1 || k > n) throw ValidationError("invariant 1 <= k <= n violated");
  if (family == Family::SBM && n % k != 0) throw ValidationError("invariant k | n violated (SBM)");
  if (family == Family::TS && k % 2 != 0) throw ValidationError("invariant k even violated (TS)");
  if (q <= 0 || q > Rational(1, 2)) throw ValidationError("invariant 0 < q <= 1/2 violated");
  if (lambda < 0) throw ValidationError("invariant lambda >= 0 violated");
  if (q + lambda > 1) throw ValidationError("invariant q + lambda <= 1 violated");
}

bool ModelSpec::active(std::int64_t a, std::int64_t b) const {
  switch (family) {
    case Family::HS: return a <= k && b <= k;
    case Family::SBM: return (a - 1) / k == (b - 1) / k;
    case Family::TS: return 2 * std::llabs(a - b) <= k;
  }
  return false;
}

bool ModelSpec::in_altered_set(std::int64_t lhat, std::int64_t a) const {
  switch (family) {
    case Family::HS: return a <= k;
    case Family::SBM: return (a - 1) / k + 1 == lhat;
    case Family::TS: return 2 * std::llabs(a - lhat) <= k;
  }
  return false;
}

std::int64_t ModelSpec::lhat_range() const {
  switch (family) {
    case Family::HS: return 1;
    case Family::SBM: return n / k;
    case Family::TS: return n;
  }
  return 1;
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << to_string(family) << "-" << (sampling == Sampling::Independent ? "I" : "P") << "(n=" << n << ", k=" << k
     << ", q=" << q.get_str() << ", lambda=" << lambda.get_str() << ")";
  return os.str();
}

Rational theta(const ModelSpec& model, std::int64_t a, std::int64_t b) {
  if (a == b) throw ValidationError("theta requires distinct labels");
  if (a < 1 || b < 1 || a > model.n || b > model.n) throw ValidationError("theta label outside [1, n]");
  return model.active(a, b) ? model.lambda : Rational(0);
}

AlterationSpec AlterationSpec::make(Rational epsilon) {
  AlterationSpec a{std::move(epsilon)};
  a.validate();
  return a;
}

void AlterationSpec::validate() const {
  if (epsilon <= 0 || epsilon >= 1) throw ValidationError("invariant 0 < epsilon < 1 violated");
}

}  // namespace ldgram
