#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conflab/cli_runner.hpp"

using namespace conflab;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "conflab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("conflab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("CONFLAB_OUT_DIR");
  }
  void TearDown() override { fs::remove_all(dir_); }

  nlohmann::json read_json(const std::string& name) const { return nlohmann::json::parse(slurp(dir_ / name)); }

  fs::path dir_;
};

}  // namespace

TEST(Config, ParsesKeyValueText) {
  const RunConfig c = parse_config_text("# comment\nn = 3\nop = gjms:1  # trailing\n\ntol=1e-9\nsuite = sl2, spectrum\n");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.op, "gjms:1");
  EXPECT_DOUBLE_EQ(c.tolerance, 1e-9);
  EXPECT_EQ(c.suite, (std::vector<std::string>{"sl2", "spectrum"}));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config_text("bogus = 1"), ConfigError);
  EXPECT_THROW(parse_config_text("n = three"), ConfigError);
  EXPECT_THROW(parse_config_text("n 3"), ConfigError);
  EXPECT_THROW(parse_config_text("suite = sl2, nothing"), ConfigError);
  RunConfig c;
  c.tolerance = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  RunConfig s;
  s.n = 4;
  s.op = "sigma2";
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST_F(CliTest, VerifyDefaultPasses) {
  const CliRun r = run({"verify", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = read_json("verify.json");
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
}

TEST_F(CliTest, VerifyRejectsSigma2AtFour) {
  const CliRun r = run({"verify", "-n", "4", "--op", "sigma2", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("config error"), std::string::npos);
}

TEST_F(CliTest, EmptySuiteGivesEmptyReport) {
  const CliRun r = run({"verify", "--suite", "", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(read_json("verify.json")["checks"].empty());
}

TEST_F(CliTest, VerifyReportsExactRationals) {
  const CliRun r = run({"verify", "-n", "5", "--op", "sigma2", "--suite", "associated", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto c = read_json("verify.json")["checks"][0];
  EXPECT_EQ(c["value"], "5/128");
  EXPECT_EQ(c["expected"], "5/128");
}

TEST_F(CliTest, SpectrumTable) {
  CliRun r = run({"spectrum", "-n", "3", "-k", "1", "--lmax", "2", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  auto rows = read_json("spectrum.json")["rows"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["ambient"], "3/4");
  EXPECT_EQ(rows[1]["ambient"], "15/4");
  EXPECT_EQ(rows[2]["ambient"], "35/4");
  for (const auto& row : rows) EXPECT_EQ(row["agreement"], "exact");

  r = run({"spectrum", "-n", "5", "-k", "2", "--lmax", "0", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(read_json("spectrum.json")["rows"][0]["factorization"], "105/16");

  r = run({"spectrum", "-n", "3", "-k", "2", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitConfig);
}

TEST_F(CliTest, MinimizeConformalLaplacian) {
  const CliRun r = run({"minimize", "-n", "3", "--op", "gjms:1", "--seed", "42", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const double Y = read_json("minimize.json")["Y"].get<double>();
  const double expected = 0.75 * std::pow(2 * M_PI * M_PI, 2.0 / 3);
  EXPECT_NEAR(Y, expected, 1e-6 * expected);
}

TEST_F(CliTest, MinimizeReportsNonConvergence) {
  const CliRun r = run({"minimize", "-n", "3", "--degree", "2", "--max-iter", "1", "--amplitude", "0.3", "--out-dir",
                     dir_.string()});
  EXPECT_EQ(r.code, kExitNoConvergence);
}

TEST_F(CliTest, OutputIsBitIdentical) {
  const std::vector<std::string> args = {"minimize", "-n", "3", "--degree", "2", "--seed", "3", "--out-dir", dir_.string()};
  ASSERT_EQ(run(args).code, kExitOk);
  const std::string first = slurp(dir_ / "minimize.json");
  ASSERT_EQ(run(args).code, kExitOk);
  EXPECT_EQ(slurp(dir_ / "minimize.json"), first);

  const std::vector<std::string> b = {"branches", "-n", "3", "--length", "13", "--format", "csv", "--out-dir",
                                      dir_.string()};
  ASSERT_EQ(run(b).code, kExitOk);
  const std::string csv = slurp(dir_ / "branches.csv");
  ASSERT_EQ(run(b).code, kExitOk);
  EXPECT_EQ(slurp(dir_ / "branches.csv"), csv);
}

TEST_F(CliTest, BranchesBelowBifurcation) {
  const CliRun r = run({"branches", "-n", "3", "--length", "3", "--format", "csv", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(dir_ / "branches.csv"));
  std::string header;
  std::string row;
  std::string extra;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header.rfind("multiplicity,", 0), 0u);
  EXPECT_EQ(row.rfind("0,", 0), 0u);
  EXPECT_FALSE(std::getline(csv, extra));
}

TEST_F(CliTest, EigenvalueAndBalance) {
  CliRun r = run({"eigenvalue", "-n", "3", "--op", "gjms:1", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(read_json("eigenvalue.json")["lambda"].get<double>(), 0.75, 1e-10);
  r = run({"balance", "-n", "3", "--op", "gjms:1", "--rapidity", "0.6", "--quad-scheme", "gauss", "--quad-nodes", "24",
           "--tol", "1e-10", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = read_json("balance.json");
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_LT(j["balanced_oscillation"].get<double>(), 1e-8);
}

TEST_F(CliTest, MalformedFlagPrintsUsage) {
  const CliRun r = run({"verify", "--no-such-flag"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "-n", "x", "--out-dir", dir_.string()}).code, kExitConfig);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const fs::path cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "n = 5\nk = 2\nlmax = 1\nformat = csv\n";
  const CliRun r = run({"spectrum", "--config", cfg.string(), "-n", "6", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(dir_ / "spectrum.csv");
  // (6, 2) at l = 0: (4 * 6 / 4)(2 * 8 / 4) = 24.
  EXPECT_NE(csv.find("0,24,24,exact"), std::string::npos) << csv;
}

TEST_F(CliTest, EnvironmentOverridesOutputDirectory) {
  const fs::path env_dir = dir_ / "env";
  setenv("CONFLAB_OUT_DIR", env_dir.c_str(), 1);
  const CliRun r = run({"spectrum", "-n", "3", "--lmax", "1", "--out-dir", (dir_ / "flag").string()});
  unsetenv("CONFLAB_OUT_DIR");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(fs::exists(env_dir / "spectrum.json"));
  EXPECT_FALSE(fs::exists(dir_ / "flag" / "spectrum.json"));
}

TEST_F(CliTest, ComposedBoostsAreBalanced) {
  const CliRun r = run({"balance", "-n", "3", "--boost", "0:0.3", "--boost", "2:0.4", "--quad-scheme", "gauss",
                        "--quad-nodes", "24", "--tol", "1e-10", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = read_json("balance.json");
  EXPECT_EQ(j["config"]["boost"], "0:0.3,2:0.4");
  EXPECT_LT(j["balanced_oscillation"].get<double>(), 1e-8);
  EXPECT_EQ(run({"balance", "-n", "3", "--boost", "5:0.1", "--out-dir", dir_.string()}).code, kExitConfig);
}
