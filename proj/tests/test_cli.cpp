#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cifh");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cifh::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cifh_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, HubbardSweepCsv) {
  const auto csv = temp_path("hubbard.csv");
  const auto r = run_cli({"solve", "--generate", "hubbard-triangle", "--t", "1", "--U", "2", "--mu", "0", "--sweep",
                          "40", "--csv", csv.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("p_class,energy_class,energy_quad,energy_total,ratio\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 42);
  std::filesystem::remove(csv);
}

TEST(Cli, SweepWritesCsvToStdout) {
  const auto r = run_cli({"sweep", "--generate", "hubbard-triangle", "--grid", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 6);
}

TEST(Cli, FmcGraphWithOracle) {
  const auto r = run_cli({"solve", "--graph", "line4", "--convention", "fmc", "--oracle", "--grid", "8"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("exact_ratio="), std::string::npos);
  EXPECT_NE(r.out.find("lambda_max=2.366"), std::string::npos);
}

TEST(Cli, GraphRequiresFmcConvention) {
  const auto r = run_cli({"solve", "--graph", "line4", "--convention", "traceless"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, MalformedInstanceNamesTheField) {
  const auto p = temp_path("bad.json");
  std::ofstream(p) << R"({"version":1,"n":2,"convention":"traceless","bogus":1,
    "interaction_edges":[],"potentials":[0,0],"hopping_edges":[]})";
  const auto r = run_cli({"solve", "--instance", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bogus: unknown field"), std::string::npos) << r.err;
  std::filesystem::remove(p);
}

TEST(Cli, UnknownOptionIsAnError) {
  EXPECT_EQ(run_cli({"solve", "--no-such-flag"}).code, 1);
  EXPECT_EQ(run_cli({"solve", "--generate", "hubbard-triangle", "--grid", "0"}).code, 1);
}

TEST(Cli, ReportsAreByteIdentical) {
  const auto a = temp_path("a.json"), b = temp_path("b.json");
  for (const auto& p : {a, b}) {
    const auto r = run_cli({"solve", "--generate", "random", "--n", "5", "--seed", "3", "--grid", "6", "--oracle",
                            "--report", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const std::string ta = slurp(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b));
  EXPECT_NE(ta.find("\"schema_version\""), std::string::npos);
  EXPECT_NE(ta.find("\"ratio_bound\""), std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, GeneratedDocumentsRoundTrip) {
  const auto r = run_cli({"generate", "--generate", "random", "--n", "6", "--seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = temp_path("gen.json");
  std::ofstream(p) << r.out;
  const auto again = run_cli({"generate", "--instance", p.string()});
  EXPECT_EQ(again.out, r.out);
  std::filesystem::remove(p);
}

TEST(Cli, RandomGenerationNeedsASeed) {
  EXPECT_EQ(run_cli({"generate", "--generate", "random", "--n", "6"}).code, 1);
}

TEST(Cli, GoemansWilliamsonNeedsASeed) {
  const auto gen = run_cli({"generate", "--generate", "random", "--n", "6", "--convention", "psd", "--seed", "2"});
  ASSERT_EQ(gen.code, 0);
  const auto p = temp_path("psd.json");
  std::ofstream(p) << gen.out;
  const auto r = run_cli({"solve", "--instance", p.string(), "--psd-mode", "gw", "--grid", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  const auto ok = run_cli({"solve", "--instance", p.string(), "--psd-mode", "gw", "--grid", "4", "--seed", "1"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  std::filesystem::remove(p);
}

TEST(Cli, RequireRatioGivesExitTwo) {
  const auto r = run_cli({"solve", "--generate", "hubbard-triangle", "--grid", "4", "--require-ratio", "1.5"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, OracleHeisenbergLine) {
  const auto r = run_cli({"oracle", "--generate", "heisenberg-line4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("lambda_max=1.61602540378"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("gaussian ceiling"), std::string::npos);
}

TEST(Cli, OracleRefusesLargeInstances) {
  const auto r = run_cli({"oracle", "--generate", "random", "--n", "20", "--seed", "1", "--density", "0.1"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, BenchFilterRunsOnlyTheSelectedCriterion) {
  const auto r = run_cli({"bench", "--filter", "heisenberg-line"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(count_lines(r.out), 2);
  EXPECT_EQ(r.out.rfind("PASS  1 heisenberg-line", 0), 0u) << r.out;
  EXPECT_EQ(run_cli({"bench", "--filter", "nothing-matches"}).code, 1);
}
