#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "config.hpp"
#include "json.hpp"
#include "runner.hpp"

namespace coupled::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("coupled_cli_") + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

int run(const json& j, const fs::path& out, std::string* err_text = nullptr) {
  ExperimentConfig cfg = parse_config(j);
  cfg.output_dir = out;
  std::ostringstream o, e;
  int code = run_experiment(cfg, o, e);
  if (err_text) *err_text = e.str();
  return code;
}

TEST(ParseConfig, MinimalFileGetsDefaults) {
  ExperimentConfig c = parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "matrix": {"spectrum": [2, 1]}})"));
  EXPECT_EQ(c.mode, Mode::averaged);
  EXPECT_EQ(c.problem, Problem::pca);
  EXPECT_EQ(c.rule, "L2");
  EXPECT_EQ(c.integrator.dt, 0.05);
  EXPECT_EQ(c.integrator.steps, 10000u);
  EXPECT_EQ(c.integrator.method, Method::rk4);
  EXPECT_EQ(c.schedule.kind, RateSchedule::Kind::inverse_time);
  EXPECT_EQ(c.schedule.gamma0, 0.05);
  EXPECT_EQ(c.schedule.t0, 100.0);
  EXPECT_EQ(c.samples, 100000u);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.matrix.seed, 1u);
  EXPECT_FALSE(c.report_wall_time);
}

TEST(ParseConfig, UnknownKeyIsNamed) {
  try {
    parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "matrix": {"spectrum": [2, 1]}, "dtt": 0.1})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dtt"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca",
      "matrix": {"spectrum": [2, 1]}, "integrator": {"dtt": 0.1}})")),
               ConfigError);
}

TEST(ParseConfig, InvalidCombinations) {
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "online", "problem": "svd", "rule": "SUM_FULL",
      "matrix": {"spectrum": [2, 1]}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "rule": "L2_SIMPLE",
      "matrix": {"spectrum": [2, 1]}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca",
      "matrix": {"spectrum": [2, 1]}, "integrator": {"dt": -1}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca",
      "matrix": {"spectrum": [2, 1]}, "integrator": {"steps": 0}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "matrix": {"spectrum": [1, 2]}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "matrix": {"csv": "missing.csv"}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "sideways"})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"mode": "averaged", "problem": "pca", "seed": "seven",
      "matrix": {"spectrum": [2, 1]}})")),
               ConfigError);
}

TEST(ParseConfig, EchoRoundTrips) {
  ExperimentConfig c = parse_config(json::parse(R"({"mode": "online", "problem": "svd", "rule": "SUM_MOD",
      "matrix": {"spectrum": [3, 1], "rows": 3, "cols": 2, "seed": 4}, "noise": 0.25, "seed": 9,
      "schedule": {"kind": "constant", "gamma0": 0.01}})"));
  json echo = to_json(c);
  json again = to_json(parse_config(echo));
  EXPECT_EQ(echo, again);
}

TEST(ParseConfig, CsvMatrixResolvesAgainstConfigDirectory) {
  TempDir dir;
  std::ofstream(dir.path() / "c.csv") << "2,2\n2,0.5\n0.5,1\n";
  std::ofstream(dir.path() / "cfg.json")
      << R"({"mode": "averaged", "problem": "pca", "matrix": {"csv": "c.csv"}, "output_dir": "o"})";
  ExperimentConfig c = parse_config_file(dir.path() / "cfg.json");
  ASSERT_TRUE(c.matrix.csv.has_value());
  EXPECT_TRUE(fs::exists(*c.matrix.csv));
  c.output_dir = dir.path() / "o";
  std::ostringstream o, e;
  EXPECT_EQ(run_experiment(c, o, e), kExitOk) << e.str();
}

TEST(Run, AveragedPcaReachesTheOracle) {
  TempDir dir;
  json j = json::parse(R"({"mode": "averaged", "problem": "pca", "rule": "L2",
      "matrix": {"spectrum": [10, 1]}, "seed": 7})");
  ASSERT_EQ(run(j, dir.path()), kExitOk);
  json s = json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_EQ(s["status"], "ok");
  EXPECT_LT(s["angle"].get<double>(), 1e-6);
  EXPECT_LE(s["steps_completed"].get<int>(), 10000);
  EXPECT_FALSE(s.contains("wall_time_s"));
  std::string csv = slurp(dir.path() / "trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,t,w0,w1,lambda,residual,constraint_u,constraint_v,angle");
}

TEST(Run, StabilityPrincipalIsAnAttractor) {
  TempDir dir;
  json j = json::parse(R"({"mode": "stability", "matrix": {"spectrum": [10, 1], "rows": 2, "cols": 2}})");
  ASSERT_EQ(run(j, dir.path()), kExitOk);
  json s = json::parse(slurp(dir.path() / "stability.json"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0]["triple_index"], 1);
  EXPECT_EQ(s[0]["classification"], "attractor");
  EXPECT_EQ(s[0]["numeric"].size(), 6u);
  EXPECT_EQ(s[0]["numeric"][0].size(), 2u);
}

TEST(Run, StabilityTransposesWideMatrices) {
  TempDir dir;
  json j = json::parse(R"({"mode": "stability", "matrix": {"spectrum": [10, 1], "rows": 2, "cols": 3}})");
  ASSERT_EQ(run(j, dir.path()), kExitOk);
  json s = json::parse(slurp(dir.path() / "stability.json"));
  EXPECT_TRUE(s[0]["transposed"].get<bool>());
  EXPECT_EQ(s[0]["numeric"].size(), 7u);
}

TEST(Run, DerivcheckWritesKernelErrors) {
  TempDir dir;
  json j = json::parse(R"({"mode": "derivcheck", "derivcheck": {"samples": 20, "max_dim": 5}})");
  ASSERT_EQ(run(j, dir.path()), kExitOk);
  json s = json::parse(slurp(dir.path() / "derivcheck.json"));
  EXPECT_EQ(s["samples"], 20);
  EXPECT_LT(s["max_relative_error"]["rayleigh_gradient"].get<double>(), 1e-6);
  EXPECT_LT(s["max_relative_error"]["unit_scalar_gradient"].get<double>(), 1e-6);
  EXPECT_LT(s["gradient_norm_at_principal"]["P_SVD1"].get<double>(), 1e-6);
}

TEST(Run, NumericalFailureExitsWithTwo) {
  TempDir dir;
  // A huge constant rate overshoots and the estimates blow up or cross the floor.
  json j = json::parse(R"({"mode": "online", "problem": "pca", "matrix": {"spectrum": [10, 1]},
      "schedule": {"kind": "constant", "gamma0": 50}, "samples": 1000})");
  std::string err;
  EXPECT_EQ(run(j, dir.path(), &err), kExitNumerical);
  json e = json::parse(err);
  EXPECT_TRUE(e.contains("error"));
  EXPECT_TRUE(e.contains("message"));
  EXPECT_EQ(err.find('\n'), err.size() - 1);
}

TEST(Run, DeterministicOutputs) {
  TempDir a, b;
  json j = json::parse(R"({"mode": "online", "problem": "svd", "rule": "SUM_MOD",
      "matrix": {"spectrum": [1, 0.1], "rows": 3, "cols": 2}, "samples": 5000, "seed": 3,
      "integrator": {"thin": 50}})");
  ASSERT_EQ(run(j, a.path() / "o"), kExitOk);
  ASSERT_EQ(run(j, b.path() / "o"), kExitOk);
  for (const char* f : {"trajectory.csv", "summary.json"}) {
    EXPECT_FALSE(slurp(a.path() / "o" / f).empty());
    EXPECT_EQ(slurp(a.path() / "o" / f), slurp(b.path() / "o" / f)) << f;
  }
}

int tool(const std::string& args) {
  const std::string cmd = std::string(COUPLED_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodesAndNoOutputOnConfigErrors) {
  TempDir dir;
  std::ofstream(dir.path() / "bad.json")
      << R"({"mode": "averaged", "problem": "pca", "matrix": {"spectrum": [2, 1]}, "integrator": {"dt": 0}})";
  const fs::path out = dir.path() / "out";
  EXPECT_EQ(tool("run --config " + (dir.path() / "bad.json").string() + " --out " + out.string()), kExitConfig);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(tool("validate --config " + (dir.path() / "bad.json").string()), kExitConfig);
  EXPECT_EQ(tool("run --config " + (dir.path() / "absent.json").string()), kExitConfig);
  EXPECT_EQ(tool("version"), kExitOk);
  EXPECT_EQ(tool("frobnicate"), kExitConfig);
}

}  // namespace
}  // namespace coupled::cli
