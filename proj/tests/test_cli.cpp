#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqlat/cli.hpp"
#include "eqlat/config_io.hpp"
#include "eqlat/csv.hpp"
#include "eqlat/experiments.hpp"

using namespace eqlat;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eqlat_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, NumberFormat) {
  EXPECT_EQ(format_number(10.0), "1.0000000000000000e+01");
  EXPECT_EQ(format_number(-0.25), "-2.5000000000000000e-01");
  EXPECT_EQ(format_number(std::nan("")), "");
}

TEST(Cli, VerifyBuiltInScenarioExitsZero) {
  const fs::path dir = scratch("verify");
  const CliRun r = run({"verify", "fig3_4_5", "--out", dir.string()});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("status = pass"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "fig3_4_5_eq_vs_indiff_verify.csv"));
}

TEST(Cli, SolveWritesBothModes) {
  const fs::path dir = scratch("solve");
  const CliRun r = run({"solve", "--figure", "fig9", "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string csv = slurp(dir / "fig9_regime_consistent.csv");
  EXPECT_TRUE(fs::exists(dir / "fig9_regime_inconsistent.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "node,time_index,shocks,regimes,C,S,gamma,D,alpha,kernel_from_parent,child_kernels");
  EXPECT_NE(csv.find("+-+|"), std::string::npos);
  EXPECT_NE(csv.find("bull|bear"), std::string::npos);
}

TEST(Cli, SolveFromScenarioFile) {
  const fs::path dir = scratch("file");
  write_atomic(dir / "s.json", serialize_config(scenario("fig8")));
  const CliRun r = run({"solve", "--scenario", (dir / "s.json").string(), "--mode", "inconsistent",
                     "--out", dir.string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig8_two_period_inconsistent.csv"));
  EXPECT_FALSE(fs::exists(dir / "fig8_two_period_consistent.csv"));
}

TEST(Cli, PathCapGuardExitsTwo) {
  const fs::path dir = scratch("cap");
  const CliRun r = run({"solve", "--figure", "fig8", "--path-cap", "10", "--out", dir.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("E_RESOURCE"), std::string::npos) << r.err;
}

TEST(Cli, ConfigErrorExitsTwo) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "bad.json") << "{ \"dim\": 3 ";
  const CliRun r = run({"verify", "--scenario", (dir / "bad.json").string(), "--out", dir.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("E_PARSE"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({"solve", "--mode", "sideways", "fig8"}).status, 2);
  EXPECT_EQ(run({"figure", "fig10"}).status, 2);
}

TEST(Cli, FigureWithGammaShift) {
  const fs::path dir = scratch("fig9");
  const CliRun r = run({"figure", "fig9", "--gamma-shift", "0.2", "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig9.csv"));
  const std::string prov = slurp(dir / "fig9.provenance.json");
  EXPECT_NE(prov.find("\"gamma_shift\": \"2.0000000000000001e-01\""), std::string::npos) << prov;
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path dir = scratch("env");
  ::setenv("EQLAT_OUT_DIR", dir.string().c_str(), 1);
  const CliRun r = run({"figure", "fig6"});
  ::unsetenv("EQLAT_OUT_DIR");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig6.csv"));
}

TEST(Cli, FigureIsByteDeterministic) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  ASSERT_EQ(run({"figure", "fig8", "--out", a.string()}).status, 0);
  ASSERT_EQ(run({"figure", "fig8", "--out", b.string()}).status, 0);
  EXPECT_EQ(slurp(a / "fig8.csv"), slurp(b / "fig8.csv"));
  EXPECT_EQ(slurp(a / "fig8.provenance.json"), slurp(b / "fig8.provenance.json"));
}

TEST(Cli, SweepRunsBatch) {
  const fs::path dir = scratch("sweep");
  write_atomic(dir / "a.json", serialize_config(scenario("fig6")));
  write_atomic(dir / "b.json", serialize_config(scenario("fig9")));
  const CliRun r = run({"sweep", "--scenario", (dir / "a.json").string(), "--scenario",
                     (dir / "b.json").string(), "--out", dir.string()});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  const std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
