#include "io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "ldgram/errors.hpp"

namespace ldgram::io {

namespace {

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const ModelSpec& model) {
  return Json{{"family", to_string(model.family)},
              {"sampling", to_string(model.sampling)},
              {"n", model.n},
              {"k", model.k},
              {"q", to_string(model.q)},
              {"lambda", to_string(model.lambda)}};
}

ModelSpec model_from_json(const Json& j) {
  try {
    return ModelSpec::make(parse_family(require(j, "family").get<std::string>()),
                           parse_sampling(require(j, "sampling").get<std::string>()),
                           require(j, "n").get<std::int64_t>(), require(j, "k").get<std::int64_t>(),
                           parse_rational(require(j, "q").get<std::string>()),
                           parse_rational(require(j, "lambda").get<std::string>()));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed model: ") + e.what());
  }
}

Json to_json(const GramMatrix& gram) {
  const std::size_t N = gram.size();
  Json templates = Json::array(), variance = Json::array(), gamma = Json::array(), floats = Json::array(),
       border = Json::array();
  for (const auto& t : gram.templates) templates.push_back(t.to_string());
  for (const auto& v : gram.variance) variance.push_back(to_string(v));
  const bool exact = gram.exact();
  Json scalar_se = Json::array(), entry_se = Json::array();
  for (std::size_t i = 0; i < N; ++i) {
    Json row = Json::array(), frow = Json::array(), srow = Json::array(), erow = Json::array();
    for (std::size_t j = 0; j < N; ++j) {
      const MomentValue& s = gram.scalar(i, j);
      if (s.is_exact()) {
        row.push_back(to_string(s.exact()));
      } else {
        row.push_back(s.value());
      }
      srow.push_back(s.std_error());
      erow.push_back(gram.std_error(i, j));
      frow.push_back(static_cast<double>(gram.entry(i, j)));
    }
    gamma.push_back(row);
    floats.push_back(frow);
    scalar_se.push_back(srow);
    entry_se.push_back(erow);
    if (i > 0) border.push_back(static_cast<double>(gram.entry(0, i)));
  }
  Json out{{"model", to_json(gram.model)},
           {"D", gram.D},
           {"rooted", gram.rooted},
           {"exact", exact},
           {"templates", templates},
           {"variance_proxy", variance},
           {"gamma", gamma},
           {"float_gamma", floats},
           {"border", border}};
  if (!exact) {
    out["scalar_std_error"] = scalar_se;
    out["std_error"] = entry_se;
  }
  return out;
}

GramMatrix gram_from_json(const Json& j) {
  try {
    GramMatrix g;
    g.model = model_from_json(require(j, "model"));
    g.D = require(j, "D").get<int>();
    g.rooted = require(j, "rooted").get<bool>();
    for (const auto& t : require(j, "templates")) g.templates.push_back(Template::parse(t.get<std::string>()));
    for (const auto& v : require(j, "variance_proxy")) g.variance.push_back(parse_rational(v.get<std::string>()));
    const std::size_t N = g.variance.size();
    if (N != g.templates.size() + 1) throw ValidationError("variance_proxy does not match the template list");
    const Json& gamma = require(j, "gamma");
    if (gamma.size() != N) throw ValidationError("gamma has the wrong number of rows");
    for (std::size_t r = 0; r < N; ++r) {
      if (gamma[r].size() != N) throw ValidationError("gamma has a row of the wrong length");
      for (std::size_t c = 0; c < N; ++c) {
        const Json& e = gamma[r][c];
        if (e.is_string()) {
          g.scalars.emplace_back(parse_rational(e.get<std::string>()));
        } else {
          double se = require(j, "scalar_std_error")[r][c].get<double>();
          g.scalars.push_back(MomentValue::monte_carlo(e.get<double>(), se, 0, 0));
        }
      }
    }
    return g;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed gram file: ") + e.what());
  }
}

std::string high_to_string(const HighFloat& x, int digits) { return x.str(digits, std::ios_base::scientific); }

Json to_json(const LDReport& r, bool advantage) {
  Json out{{"D", r.D},
           {"op_norm_deviation", r.op_norm_deviation},
           {"l1_row_bound", r.l1_row_bound},
           {"optimal_coefficients", r.optimal_coefficients},
           {"templates", r.templates}};
  if (advantage) {
    out["adv_exact"] = r.adv_exact;
    out["adv_squared"] = high_to_string(r.adv_squared);
    out["adv_orthonormal_bound"] = r.adv_orthonormal_bound;
  } else {
    out["corr_exact"] = r.corr_exact;
    out["corr_squared"] = high_to_string(r.corr_squared);
    out["corr_orthonormal_approx"] = r.corr_orthonormal_approx;
  }
  return out;
}

Json to_json(const ConditionReport& r) {
  Json out{{"condition", to_string(r.which)}, {"holds", r.holds},       {"worst_ratio", r.worst_ratio},
           {"witness", r.witness},            {"evaluated", r.evaluated}, {"skipped", r.skipped}};
  if (r.second_moment_deviation) out["second_moment_deviation"] = to_string(*r.second_moment_deviation);
  return out;
}

Json to_json(const ConditionConstants& c) {
  return Json{{"c_s", to_string(c.c_s)},   {"c_m", to_string(c.c_m)},   {"c_v1", to_string(c.c_v1)},
              {"c_v2", to_string(c.c_v2)}, {"c_v3", to_string(c.c_v3)}, {"c_v4", to_string(c.c_v4)},
              {"c_vd1", to_string(c.c_vd1)}, {"c_vd2", to_string(c.c_vd2)}};
}

std::string eigenvalue_csv(const std::vector<HighFloat>& eigenvalues) {
  std::ostringstream out;
  out << "index,eigenvalue\r\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out << i << "," << high_to_string(eigenvalues[i]) << "\r\n";
  return out.str();
}

std::string comparison_csv(const std::vector<Comparison>& rows) {
  std::ostringstream out;
  out << "quantity,row,col,analytic,analytic_std_error,empirical,std_error,z\r\n";
  for (const auto& c : rows) {
    out << c.quantity << "," << c.row << "," << c.col << "," << format_double(c.analytic) << ","
        << format_double(c.analytic_std_error) << "," << format_double(c.empirical) << ","
        << format_double(c.std_error) << "," << format_double(c.z()) << "\r\n";
  }
  return out.str();
}

}  // namespace ldgram::io
