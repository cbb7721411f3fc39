#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldgram/analysis.hpp"
#include "ldgram/basis.hpp"
#include "ldgram/mc_oracle.hpp"
#include "ldgram/model.hpp"

namespace ldgram::io {

using Json = nlohmann::json;  // std::map objects, so keys come out sorted

Json to_json(const ModelSpec& model);
ModelSpec model_from_json(const Json& j);

// Exact scalars are written as rational strings; Monte-Carlo ones as numbers
// with a matching entry in scalar_std_error.
Json to_json(const GramMatrix& gram);
GramMatrix gram_from_json(const Json& j);

Json to_json(const LDReport& report, bool advantage);
Json to_json(const ConditionReport& report);
Json to_json(const ConditionConstants& consts);

std::string high_to_string(const HighFloat& x, int digits = 30);

// index,eigenvalue
std::string eigenvalue_csv(const std::vector<HighFloat>& eigenvalues);
// quantity,row,col,analytic,analytic_std_error,empirical,std_error,z
std::string comparison_csv(const std::vector<Comparison>& rows);

}  // namespace ldgram::io
