#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "cpspdc/checksum.hpp"
#include "cpspdc/manifest.hpp"
#include "test_support.hpp"

using namespace cpspdc;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cpspdc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string db_path() { return (testutil::source_dir() / "data" / "crystals.json").string(); }

std::string golden(const std::string& name) { return read_file(testutil::data_dir() / "golden" / name); }

// Drops provenance lines that carry machine-specific paths.
std::string portable(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# database: ", 0) == 0 || line.rfind("# spec_file: ", 0) == 0) continue;
    out += line + '\n';
  }
  return out;
}

const char* kSweepSpec = R"({"crystals": ["PPKTP"], "pm_type": "type2a", "variable": "lambda0",
 "range": [1200, 1250], "step": 25, "fixed": {"length_mm": 5, "width_nm": 0.2},
 "outputs": ["period", "tilt", "purity"], "grid": {"n": 60, "span": "fixed", "half_span_nm": 3}})";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1); }
  void TearDown() override { ::unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST_F(Cli, Version) {
  const Result r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(std::string(version())), std::string::npos);
}

TEST_F(Cli, PeriodGolden) {
  testutil::TempDir dir("cli");
  const auto out = (dir / "period.csv").string();
  ASSERT_EQ(run({"--db", db_path(), "--out", out, "period", "-c", "PPKTP", "--lambda0", "1550", "2502.62"}).code, 0);
  EXPECT_EQ(read_file(out), golden("period.csv"));
}

TEST_F(Cli, TiltGolden) {
  const Result r = run({"--db", db_path(), "tilt", "-c", "PPKTP", "-t", "type2a", "--lambda0", "1100", "1550", "1700"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, golden("tilt.csv"));
}

TEST_F(Cli, JsonLinesPeriod) {
  const Result r = run({"--db", db_path(), "--format", "json-lines", "period", "-c", "PPKTP", "-t", "type2a"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("crystal"), "PPKTP");
  EXPECT_NEAR(j.at("period_nm").get<double>(), 451.185, 1e-3);
}

TEST_F(Cli, GvmValues) {
  const Result r = run({"--db", db_path(), "--format", "jsonl", "gvm", "-c", "PPKTP", "-t", "type0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("lambda_gvm_nm").get<double>(), 2502.62, 0.01);
  EXPECT_NEAR(j.at("period_nm").get<double>(), 686.266, 0.001);
  EXPECT_NEAR(j.at("tilt_deg").get<double>(), 0.0, 1e-3);
}

TEST_F(Cli, SweepGoldenAndManifest) {
  testutil::TempDir dir("cli");
  const auto spec = (testutil::data_dir() / "golden" / "sweep_spec.json").string();
  const auto out = (dir / "sweep.csv").string();
  ASSERT_EQ(run({"--db", db_path(), "--out", out, "sweep", spec}).code, 0);
  EXPECT_EQ(portable(read_file(out)), golden("sweep.csv"));

  const RunManifest m = parse_manifest(read_file(manifest_path_for(out)));
  EXPECT_EQ(m.database_sha256, sha256_hex(read_file(db_path())));
  EXPECT_EQ(m.timestamp, "2023-11-14T22:13:20Z");
  EXPECT_EQ(m.outputs, std::vector<std::string>{out});
  EXPECT_EQ(m.parameters.at("pm_type"), "type2a");
}

TEST_F(Cli, RerunIsByteIdentical) {
  testutil::TempDir dir("cli");
  const auto spec = (dir / "spec.json").string();
  { std::ofstream(spec) << kSweepSpec; }
  const auto out = (dir / "sweep.csv").string();
  const std::vector<std::string> cmd{"--db", db_path(), "--out", out, "sweep", spec};
  ASSERT_EQ(run(cmd).code, 0);
  const std::string first = read_file(out);
  const std::string first_manifest = read_file(manifest_path_for(out));
  ::setenv("SOURCE_DATE_EPOCH", "1800000000", 1);
  ASSERT_EQ(run(cmd).code, 0);
  EXPECT_EQ(read_file(out), first);
  RunManifest a = parse_manifest(first_manifest);
  RunManifest b = parse_manifest(read_file(manifest_path_for(out)));
  EXPECT_NE(a.timestamp, b.timestamp);
  a.timestamp = b.timestamp;
  EXPECT_EQ(serialize_manifest(a), serialize_manifest(b));
}

TEST_F(Cli, ManifestReplaysCommand) {
  testutil::TempDir dir("cli");
  const auto out = (dir / "jsa.csv").string();
  ASSERT_EQ(run({"--db", db_path(), "--out", out, "jsa", "-c", "PPKTP", "-t", "type0", "--n", "24", "--span", "fixed:1"}).code, 0);
  const std::string first = read_file(out);
  const RunManifest m = parse_manifest(read_file(manifest_path_for(out)));
  std::filesystem::remove(out);
  std::vector<std::string> replay(m.command_line.begin() + 1, m.command_line.end());
  ASSERT_EQ(run(replay).code, 0);
  EXPECT_EQ(read_file(out), first);
}

TEST_F(Cli, JsaThenHom) {
  testutil::TempDir dir("cli");
  const auto jsa = (dir / "f.bin").string();
  const Result j = run({"--db", db_path(), "--out", jsa, "jsa", "-c", "PPKTP", "-t", "type2a", "-w", "0.2", "--n", "100"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_NE(j.out.find("purity"), std::string::npos);
  const auto hom = (dir / "hom.csv").string();
  const Result h = run({"--db", db_path(), "--out", hom, "hom", "--jsa", jsa, "--points", "51", "--gnuplot"});
  ASSERT_EQ(h.code, 0) << h.err;
  const std::string text = read_file(hom);
  EXPECT_NE(text.find("tau_ps,p4\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(manifest_path_for(hom)));
  EXPECT_TRUE(std::filesystem::exists(hom + ".gp"));
}

TEST_F(Cli, OptimizeSmallGrid) {
  const Result r = run({"--db", db_path(), "optimize", "-c", "PPKTP", "-t", "type2a", "--length-range", "3", "8",
                        "--width-range", "0.1", "0.3", "--grid", "3", "--n", "50", "--no-refine"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("best_purity"), std::string::npos);
}

TEST_F(Cli, DbValidate) {
  const Result r = run({"--db", db_path(), "db-validate"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("5 crystals OK"), std::string::npos);
  EXPECT_EQ(r.out.rfind("crystal,axis,form,min_nm,max_nm,n_1550\n", 0), 0u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kValidation);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kValidation);
  EXPECT_EQ(run({"--db", db_path(), "period", "-c", "PPLN"}).code, cli::kValidation);
  EXPECT_EQ(run({"--db", db_path(), "period", "-c", "PPKTP", "--lambda0", "9000"}).code, cli::kValidation);
  EXPECT_EQ(run({"--db", db_path(), "--format", "xml", "period", "-c", "PPKTP"}).code, cli::kValidation);
  EXPECT_EQ(run({"--db", db_path(), "gvm", "-c", "PPKTP", "--bracket", "1500", "1600"}).code, cli::kSolver);
  EXPECT_EQ(run({"--db", "/nonexistent/db.json", "period", "-c", "PPKTP"}).code, cli::kIo);
  EXPECT_EQ(run({"--db", db_path(), "--out", "/nonexistent/dir/x.csv", "period", "-c", "PPKTP"}).code, cli::kIo);
  EXPECT_EQ(run({"--db", db_path(), "hom", "--jsa", "/nonexistent/f.bin"}).code, cli::kIo);
  const Result bad = run({"--db", db_path(), "jsa", "-c", "PPKTP", "-w", "-1"});
  EXPECT_EQ(bad.code, cli::kValidation);
  EXPECT_FALSE(bad.err.empty());
}

TEST_F(Cli, EmptySweepRangeIsValidationError) {
  testutil::TempDir dir("cli");
  const auto spec = (dir / "spec.json").string();
  { std::ofstream(spec) << R"({"crystals": ["PPKTP"], "range": [1600, 1500], "step": 10})"; }
  EXPECT_EQ(run({"--db", db_path(), "sweep", spec}).code, cli::kValidation);
}

TEST_F(Cli, TiltZeroCrossingNearGvm) {
  testutil::TempDir dir("cli");
  const auto spec = (dir / "spec.json").string();
  { std::ofstream(spec) << R"({"crystals": ["PPKTP"], "pm_type": "type2a", "range": [1100, 1700], "step": 5, "outputs": ["tilt"]})"; }
  const Result r = run({"--db", db_path(), "--format", "json-lines", "sweep", spec});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  double prev_l = 0.0, prev_t = 0.0, crossing = 0.0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("header")) continue;
    const double l = j.at("lambda0_nm");
    const double t = j.at("tilt_deg");
    if (prev_l > 0.0 && prev_t < 0.0 && t >= 0.0) crossing = prev_l + (l - prev_l) * (-prev_t) / (t - prev_t);
    prev_l = l;
    prev_t = t;
  }
  EXPECT_NEAR(crossing, 1225.19, 0.5);
}
