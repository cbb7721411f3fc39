#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "io.hpp"
#include "ldgram/analysis.hpp"

using namespace ldgram;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run ldgram_cli(const std::string& args) {
  const std::string cmd = std::string(LDGRAM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldgram_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

const std::string kHs = "--family hs --sampling independent --n 12 --k 3 --q 1/2 --lambda 1/10";

}  // namespace

TEST_F(Cli, TemplatesListing) {
  auto r = ldgram_cli("templates 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out), 4);
  EXPECT_EQ(r.out.rfind("template,vertices,edges,automorphisms\r\n", 0), 0u);
  EXPECT_NE(r.out.find("\"v=2;roots=none;edges=(0,1)\",2,1,2\r\n"), std::string::npos);
  EXPECT_EQ(count_lines(ldgram_cli("--rooted templates 1").out), 5);
  EXPECT_EQ(count_lines(ldgram_cli("--D 3 templates").out), 9);
}

TEST_F(Cli, GramThenSpectrum) {
  ASSERT_EQ(ldgram_cli(kHs + " --D 2 gram --out " + path("g.json")).code, 0);
  auto r = ldgram_cli("spectrum --in " + path("g.json") + " --csv " + path("eig.csv"));
  ASSERT_EQ(r.code, 0);
  auto summary = io::Json::parse(r.out);
  auto g = gram_matrix(2, ModelSpec::make(Family::HS, Sampling::Independent, 12, 3, Rational(1, 2), Rational(1, 10)),
                       false);
  EXPECT_NEAR(summary["op_norm_deviation"].get<double>(), operator_norm_deviation(g).exact_eig, 1e-15);
  EXPECT_EQ(summary["dimension"].get<int>(), 4);
  const std::string csv = slurp(path("eig.csv"));
  EXPECT_EQ(csv.rfind("index,eigenvalue\r\n", 0), 0u);
  EXPECT_EQ(count_lines(csv), 5);
}

TEST_F(Cli, GramJsonRoundTrip) {
  auto m = ModelSpec::make(Family::TS, Sampling::Permutation, 10, 4, Rational(1, 2), Rational(1, 7));
  auto g = gram_matrix(2, m, true);
  auto back = io::gram_from_json(io::Json::parse(io::to_json(g).dump()));
  EXPECT_EQ(back.model.describe(), m.describe());
  EXPECT_EQ(back.templates, g.templates);
  EXPECT_EQ(back.variance, g.variance);
  for (std::size_t i = 0; i < g.scalars.size(); ++i) EXPECT_EQ(back.scalars[i].exact(), g.scalars[i].exact());
}

TEST_F(Cli, AdvantageWithoutAlterationIsOne) {
  auto r = ldgram_cli(kHs + " --D 2 --epsilon 0 adv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(io::Json::parse(r.out)["adv_exact"].get<double>(), 1.0, 1e-9);
  auto c = ldgram_cli(kHs + " --D 1 corr");
  ASSERT_EQ(c.code, 0);
  auto j = io::Json::parse(c.out);
  EXPECT_DOUBLE_EQ(j["x_mean"].get<double>(), 1.0 / 16);
  EXPECT_GE(j["corr_exact"].get<double>(), 1.0 / 16);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(ldgram_cli("--family nope --n 12 --k 3 gram").code, 2);
  EXPECT_EQ(ldgram_cli("--family sbm --n 10 --k 3 --lambda 1/10 gram").code, 2);
  EXPECT_EQ(ldgram_cli("gram --bogus").code, 2);
  EXPECT_EQ(ldgram_cli("").code, 2);
  EXPECT_EQ(ldgram_cli("spectrum --in " + path("missing.json")).code, 2);
  EXPECT_EQ(ldgram_cli(kHs + " --D 6 gram").code, 3);
  EXPECT_EQ(ldgram_cli("--family ts --n 12 --k 4 --q 1/2 --lambda 1/5 --D 2 adv").code, 4);
}

TEST_F(Cli, ConditionsReport) {
  auto r = ldgram_cli(kHs + " --D 3 check-conditions --conditions moment,variance");
  ASSERT_EQ(r.code, 0);
  auto j = io::Json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 2u);
  EXPECT_TRUE(j["reports"][0]["holds"].get<bool>());
  EXPECT_EQ(j["reports"][1]["second_moment_deviation"], "0");
  EXPECT_EQ(j["constants"]["c_m"], "0");
  auto perm = io::Json::parse(
      ldgram_cli("--family hs --sampling permutation --n 8 --k 3 --lambda 1/10 --D 2 check-conditions").out);
  EXPECT_EQ(perm["reports"].size(), 4u);
}

TEST_F(Cli, SeededRunsAreByteIdentical) {
  const std::string args = "--family sbm --n 6 --k 3 --lambda 1/5 --D 1 --samples 2000 --seed 9 mc-check";
  auto a = ldgram_cli(args), b = ldgram_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_GT(count_lines(a.out), 3);
  EXPECT_NE(ldgram_cli("--family sbm --n 6 --k 3 --lambda 1/5 --D 1 --samples 2000 --seed 10 mc-check").out, a.out);
  EXPECT_EQ(ldgram_cli(kHs + " gram").out, ldgram_cli(kHs + " gram").out);
}

TEST_F(Cli, ConfigFileWithOverrides) {
  {
    std::ofstream f(path("run.ini"));
    f << "family = sbm\nn = 12\nk = 3\nlambda = 1/10\nD = 1\n";
  }
  auto r = ldgram_cli("--config " + path("run.ini") + " --k 4 gram");
  ASSERT_EQ(r.code, 0);
  auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["model"]["family"], "sbm");
  EXPECT_EQ(j["model"]["k"], 4);
  EXPECT_EQ(j["D"], 1);
}
