#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "ldgram/errors.hpp"
#include "ldgram/graph.hpp"

namespace {

using namespace ldgram;
using io::Json;

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kCap = 3, kSingular = 4 };

struct RunConfig {
  std::string family = "hs";
  std::string sampling = "independent";
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::string q = "1/2";
  std::string lambda = "0";
  int D = 2;
  std::string epsilon = "1/2";
  std::string out = "-";
  std::uint64_t seed = 1;
  std::uint64_t samples = 200'000;
  int threads = 0;
  std::uint64_t budget = 100'000'000;
  bool no_monte_carlo = false;
  bool include_non_star = false;
  int max_degree = kDefaultDegreeCap;
  bool allow_large = false;
  bool rooted = false;
  std::map<std::string, std::string> constants;

  ModelSpec model() const {
    return ModelSpec::make(parse_family(family), parse_sampling(sampling), n, k, parse_rational(q),
                           parse_rational(lambda));
  }
  GramOptions gram_options() const {
    GramOptions o;
    o.moments.budget = budget;
    o.moments.allow_monte_carlo = !no_monte_carlo;
    o.moments.mc_samples = samples;
    o.moments.seed = seed;
    o.skip_non_star = !include_non_star;
    o.threads = threads;
    return o;
  }
  EnumerationCaps caps() const { return {max_degree, allow_large}; }
  void check_degree() const {
    if (D < 0) throw ValidationError("D must be non-negative");
    if (D > max_degree && !allow_large) {
      throw CapExceeded("D=" + std::to_string(D) + " exceeds the degree cap " + std::to_string(max_degree) +
                        " (use --allow-large)");
    }
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

ConditionConstants constants_for(const RunConfig& cfg, const ModelSpec& model) {
  ConditionConstants c = ConditionConstants::defaults_for(model.family, model.sampling);
  const std::map<std::string, Rational*> slots{{"c-s", &c.c_s},   {"c-m", &c.c_m},   {"c-v1", &c.c_v1},
                                               {"c-v2", &c.c_v2}, {"c-v3", &c.c_v3}, {"c-v4", &c.c_v4},
                                               {"c-vd1", &c.c_vd1}, {"c-vd2", &c.c_vd2}};
  for (const auto& [name, value] : cfg.constants) {
    if (!value.empty()) *slots.at(name) = parse_rational(value);
  }
  c.validate();
  return c;
}

int run_templates(const RunConfig& cfg, std::optional<int> positional) {
  RunConfig local = cfg;
  if (positional) local.D = *positional;
  local.check_degree();
  const auto list = local.rooted ? enumerate_rooted_templates(local.D, local.caps())
                                 : enumerate_templates(local.D, local.caps());
  std::ostringstream out;
  out << "template,vertices,edges,automorphisms\r\n";
  for (const auto& t : list) {
    out << '"' << t.to_string() << "\"," << t.vertex_count << "," << t.edge_count() << "," << automorphism_count(t)
        << "\r\n";
  }
  write_text(local.out, out.str());
  return kOk;
}

int run_gram(const RunConfig& cfg) {
  cfg.check_degree();
  const GramMatrix g = gram_matrix(cfg.D, cfg.model(), cfg.rooted, cfg.gram_options(), cfg.caps());
  write_json(cfg.out, io::to_json(g));
  return kOk;
}

int run_spectrum(const RunConfig& cfg, const std::string& in, const std::string& csv) {
  if (in.empty()) throw ValidationError("spectrum needs --in <gram.json>");
  const GramMatrix g = io::gram_from_json(read_json(in));
  const HighMatrix gamma = g.normalized();
  const auto eig = eigenvalues(gamma);
  const Deviation dev = operator_norm_deviation(gamma);
  if (!csv.empty()) write_text(csv, io::eigenvalue_csv(eig));
  Json summary{{"dimension", g.size()},
               {"D", g.D},
               {"rooted", g.rooted},
               {"model", io::to_json(g.model)},
               {"op_norm_deviation", dev.exact_eig},
               {"l1_row_bound", dev.l1_bound},
               {"min_eigenvalue", static_cast<double>(eig.front())},
               {"max_eigenvalue", static_cast<double>(eig.back())}};
  write_json(cfg.out, summary);
  return kOk;
}

int run_adv(const RunConfig& cfg) {
  cfg.check_degree();
  const ModelSpec model = cfg.model();
  const Rational eps = parse_rational(cfg.epsilon);
  std::optional<AlterationSpec> alt;
  if (eps != 0) alt = AlterationSpec::make(eps);
  const LDReport r = advantage(cfg.D, model, alt, cfg.gram_options());
  Json j = io::to_json(r, true);
  j["model"] = io::to_json(model);
  j["epsilon"] = to_string(eps);
  write_json(cfg.out, j);
  return kOk;
}

int run_corr(const RunConfig& cfg) {
  cfg.check_degree();
  const ModelSpec model = cfg.model();
  const LDReport r = correlation(cfg.D, model, cfg.gram_options());
  Json j = io::to_json(r, false);
  j["model"] = io::to_json(model);
  j["x_mean"] = x_mean(model, cfg.gram_options().moments).value();
  write_json(cfg.out, j);
  return kOk;
}

int run_conditions(const RunConfig& cfg, std::vector<std::string> names) {
  cfg.check_degree();
  const ModelSpec model = cfg.model();
  const ConditionConstants consts = constants_for(cfg, model);
  if (names.empty()) {
    names = {"signal", "moment", "variance"};
    if (model.sampling == Sampling::Permutation) names.push_back("variance_permutation");
  }
  ConditionOptions opts;
  opts.moments = cfg.gram_options().moments;
  opts.threads = cfg.threads;
  Json reports = Json::array();
  bool all = true;
  for (const auto& name : names) {
    const ConditionReport r = check_condition(model, cfg.D, parse_condition(name), consts, opts);
    all = all && r.holds;
    reports.push_back(io::to_json(r));
  }
  write_json(cfg.out, Json{{"model", io::to_json(model)},
                           {"D", cfg.D},
                           {"constants", io::to_json(consts)},
                           {"all_hold", all},
                           {"reports", reports}});
  return kOk;
}

int run_mc_check(const RunConfig& cfg) {
  cfg.check_degree();
  const ModelSpec model = cfg.model();
  McOptions mc;
  mc.samples = cfg.samples;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  const auto rows = cross_validate(cfg.D, model, AlterationSpec::make(parse_rational(cfg.epsilon)), mc,
                                   cfg.gram_options());
  write_text(cfg.out, io::comparison_csv(rows));
  std::size_t beyond3 = 0, beyond4 = 0;
  double worst = 0.0;
  for (const auto& c : rows) {
    const double z = std::fabs(c.z());
    beyond3 += z > 3.0;
    beyond4 += z > 4.0;
    worst = std::max(worst, z);
  }
  std::cerr << "comparisons=" << rows.size() << " beyond_3sigma=" << beyond3 << " beyond_4sigma=" << beyond4
            << " max_abs_z=" << worst << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-basis Gram matrices and low-degree criteria for planted graph models"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--family", cfg.family, "hs, sbm or ts");
  app.add_option("--sampling", cfg.sampling, "independent or permutation");
  app.add_option("--n", cfg.n, "number of nodes");
  app.add_option("--k", cfg.k, "clique / block / window size");
  app.add_option("--q", cfg.q, "base edge probability (p/q or decimal)");
  app.add_option("--lambda", cfg.lambda, "signal strength (p/q or decimal)");
  app.add_option("--D", cfg.D, "degree");
  app.add_option("--epsilon", cfg.epsilon, "alteration strength; 0 means H1 = H0");
  app.add_option("--out", cfg.out, "output path, - for stdout");
  app.add_option("--seed", cfg.seed, "root seed for sampling");
  app.add_option("--samples", cfg.samples, "Monte-Carlo sample count");
  app.add_option("--threads", cfg.threads, "worker threads, 0 for LDGRAM_THREADS or all cores");
  app.add_option("--budget", cfg.budget, "largest exact latent enumeration");
  app.add_flag("--no-monte-carlo", cfg.no_monte_carlo, "fail instead of sampling when the budget is exceeded");
  app.add_flag("--include-non-star", cfg.include_non_star, "evaluate matchings known to contribute zero");
  app.add_option("--max-degree", cfg.max_degree, "degree cap");
  app.add_flag("--allow-large", cfg.allow_large, "lift the degree and vertex caps");
  app.add_flag("--rooted", cfg.rooted, "use rooted templates");
  for (const char* name : {"c-s", "c-m", "c-v1", "c-v2", "c-v3", "c-v4", "c-vd1", "c-vd2"}) {
    app.add_option(std::string("--") + name, cfg.constants[name], "condition constant");
  }

  std::optional<int> positional_d;
  auto* templates = app.add_subcommand("templates", "list canonical templates with automorphism counts");
  templates->add_option("degree", positional_d, "degree (defaults to --D)");
  auto* gram = app.add_subcommand("gram", "assemble the Gram matrix as JSON");
  std::string in, csv;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and deviation of a saved Gram matrix");
  spectrum->add_option("--in", in, "gram JSON written by 'gram'");
  spectrum->add_option("--csv", csv, "eigenvalue CSV output");
  auto* adv = app.add_subcommand("adv", "low-degree advantage");
  auto* corr = app.add_subcommand("corr", "low-degree correlation");
  std::vector<std::string> conditions;
  auto* check = app.add_subcommand("check-conditions", "evaluate the model conditions");
  check->add_option("--conditions", conditions, "signal, moment, variance, variance_permutation")->delimiter(',');
  auto* mc_check = app.add_subcommand("mc-check", "analytic moments against Monte-Carlo estimates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*templates) return run_templates(cfg, positional_d);
    if (*gram) return run_gram(cfg);
    if (*spectrum) return run_spectrum(cfg, in, csv);
    if (*adv) return run_adv(cfg);
    if (*corr) return run_corr(cfg);
    if (*check) return run_conditions(cfg, conditions);
    if (*mc_check) return run_mc_check(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const SingularGram& e) {
    std::cerr << "singular Gram matrix: " << e.what() << "\n";
    return kSingular;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
