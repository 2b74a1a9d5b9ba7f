#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "lrt/cli.hpp"
#include "lrt/textio.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixture = LRT_FIXTURE_DIR "/two_sector.csv";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lrt_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lrt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lrt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Synthetic panel written through the CLI itself.
fs::path synth_panel(const fs::path& dir, const std::string& countries = "4") {
  const auto r = run({"synth", "--out", dir.string(), "--synth-countries", countries,
                      "--synth-sectors", "5", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir / "panel.csv";
}

}  // namespace

TEST(Cli, SusceptibilityOnFixtureIsLeontiefInverse) {
  const auto out = scratch("rho");
  const auto r = run({"susceptibility", "--data", kFixture, "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(out / "matrices/rho_TOY_2014.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "row_sector,col_sector,value");
  // (I - A)^{-1} = [[1, 0.5], [0.2, 1]] / 0.9
  const std::map<std::pair<std::string, std::string>, double> expected{
      {{"A01", "A01"}, 1.0 / 0.9}, {{"A01", "C24"}, 0.5 / 0.9},
      {{"C24", "A01"}, 0.2 / 0.9}, {{"C24", "C24"}, 1.0 / 0.9}};
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = lrt::textio::split(line);
    ASSERT_EQ(f.size(), 3u);
    const double v = *lrt::textio::parse_double(f[2]);
    EXPECT_NEAR(v, expected.at({std::string(f[0]), std::string(f[1])}), 1e-15) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(fs::exists(out / "ranking.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "susceptibility");
  EXPECT_EQ(manifest["settings"]["data"], kFixture);
  EXPECT_EQ(manifest["seed"], 1);
}

TEST(Cli, PerfectPredictorHook) {
  const auto dir = scratch("perfect");
  const auto data = synth_panel(dir / "data");
  const auto r = run({"benchmark", "--data", data.string(), "--out", (dir / "run").string(),
                      "--baselines", "perturbed", "--test-perfect-lrt", "true"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(dir / "run/benchmark_perturbed.csv"));
  std::string line;
  std::getline(in, line);
  int cells = 0;
  while (std::getline(in, line) && !line.empty()) {
    const auto f = lrt::textio::split(line);
    EXPECT_NEAR(*lrt::textio::parse_double(f[2]), 1.0, 1e-12) << line;
    ++cells;
  }
  EXPECT_EQ(cells, 4 * 13);
}

TEST(Cli, DeterministicAcrossRunsAndWorkers) {
  const auto dir = scratch("determinism");
  const auto data = synth_panel(dir / "data");
  std::vector<std::string> base{"benchmark", "--data", data.string(), "--var-samples", "200"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  ASSERT_EQ(run(with({"--out", (dir / "a").string(), "--workers", "1"})).code, 0);
  ASSERT_EQ(run(with({"--out", (dir / "b").string(), "--workers", "8"})).code, 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 10u);
}

TEST(Cli, ExitCodesAndSingleLineErrors) {
  const auto out = scratch("errors");
  auto r = run({"susceptibility", "--bogus", "1"});
  EXPECT_EQ(r.code, 2);
  r = run({"susceptibility", "--data", kFixture, "--dt", "abc", "--out", out.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error=InvalidArgument category=usage", 0), 0u) << r.err;
  r = run({"susceptibility", "--data", kFixture, "--country", "ZZZ", "--out", out.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error=MissingCountryYear category=data", 0), 0u) << r.err;

  const auto bad = out / "nonproductive.csv";
  std::ofstream(bad) << "record_type,country,year,row_sector,col_sector_or_dest,value\n"
                        "FLOW,TOY,2014,A01,A01,2.4\nOUTPUT,TOY,2014,A01,,2\n";
  r = run({"ingest", "--data", bad.string(), "--out", (out / "x").string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_NE(r.err.find("error=NonProductiveEconomy"), std::string::npos);
}

TEST(Cli, FailedRunLeavesNoOutputs) {
  const auto dir = scratch("partial");
  const auto data = synth_panel(dir / "data");
  auto r = run({"scenario", "--data", data.string(), "--scenario", "/nonexistent", "--out",
                (dir / "run0").string()});
  EXPECT_EQ(r.code, 2) << r.err;
  const auto missing = dir / "missing.scenario";
  std::ofstream(missing) << "year = 2014\nshock = DEU,A02,export_to,ZZZ,-1\n";
  r = run({"scenario", "--data", data.string(), "--scenario", missing.string(), "--out",
           (dir / "run1").string()});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("MissingExportDetail"), std::string::npos);
  // Impact tables are written before the curve horizon is rejected.
  const auto late = dir / "late.scenario";
  std::ofstream(late) << "year = 2014\nhorizon = -1\nshock = DEU,A02,export_to,USA,-1\n";
  r = run({"scenario", "--data", data.string(), "--scenario", late.string(), "--country", "DEU",
           "--out", (dir / "run2").string()});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_FALSE(fs::exists(dir / "run2" / "scenario_impacts.csv"));
  EXPECT_FALSE(fs::exists(dir / "run2" / "scenario_aggregates.csv"));
  EXPECT_FALSE(fs::exists(dir / "run2" / "manifest.json"));
}

TEST(Cli, PrecedenceFlagsEnvConfig) {
  const auto dir = scratch("precedence");
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# test config\ndata = " << kFixture << "\nseed = 5\nhorizon = 2\n";
  auto manifest = [&](const fs::path& out) {
    return nlohmann::json::parse(slurp(out / "manifest.json"))["settings"];
  };
  ASSERT_EQ(run({"susceptibility", "--config", cfg.string(), "--out", (dir / "a").string()}).code, 0);
  EXPECT_EQ(manifest(dir / "a")["seed"], "5");
  setenv("LRT_SEED", "6", 1);
  ASSERT_EQ(run({"susceptibility", "--config", cfg.string(), "--out", (dir / "b").string()}).code, 0);
  EXPECT_EQ(manifest(dir / "b")["seed"], "6");
  ASSERT_EQ(run({"susceptibility", "--config", cfg.string(), "--seed", "7", "--out",
                 (dir / "c").string()})
                .code,
            0);
  EXPECT_EQ(manifest(dir / "c")["seed"], "7");
  unsetenv("LRT_SEED");
  EXPECT_EQ(manifest(dir / "c")["horizon"], "2");
}

TEST(Cli, ManifestReproducesRun) {
  const auto dir = scratch("manifest");
  ASSERT_EQ(run({"response", "--data", kFixture, "--sector", "C24", "--horizon", "5", "--out",
                 (dir / "a").string()})
                .code,
            0);
  ASSERT_EQ(run({"response", "--config", (dir / "a/manifest.json").string(), "--out",
                 (dir / "b").string()})
                .code,
            0);
  EXPECT_EQ(slurp(dir / "a/response.csv"), slurp(dir / "b/response.csv"));
  EXPECT_EQ(slurp(dir / "a/recovery.csv"), slurp(dir / "b/recovery.csv"));
}

TEST(Cli, OtherCommandsProduceOutputs) {
  const auto dir = scratch("commands");
  const auto data = synth_panel(dir / "data");
  const std::string d = data.string();
  ASSERT_EQ(run({"ingest", "--data", d, "--out", (dir / "ingest").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "ingest/panel.csv"), slurp(data));
  ASSERT_EQ(run({"forecast", "--data", d, "--country", "DEU", "--out", (dir / "fc").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "fc/forecast.csv"));
  ASSERT_EQ(run({"backbone", "--data", d, "--year", "2014", "--format", "graphml", "--out",
                 (dir / "bb").string()})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "bb/backbone_DEU_2014.graphml"));
  ASSERT_EQ(run({"simulate", "--data", d, "--country", "USA", "--year", "2000", "--horizon", "1",
                 "--burn-in", "1", "--out", (dir / "sim").string()})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "sim/trajectory.csv"));
  const auto scenario = dir / "steel.scenario";
  // The 5-sector synthetic panel has no C24; shock forestry instead.
  std::ofstream(scenario) << "name = steel\nyear = 2014\nhorizon = 5\nshock = EU28,A02,export_to,USA,-1\n";
  ASSERT_EQ(run({"scenario", "--data", d, "--scenario", scenario.string(), "--country", "DEU",
                 "--step", "0.1", "--out", (dir / "sc").string()})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "sc/scenario_curve_DEU.csv"));
  EXPECT_TRUE(fs::exists(dir / "sc/scenario_aggregates.csv"));
}

TEST(Cli, BinarySmoke) {
  const auto out = scratch("binary");
  const std::string cmd = std::string(LRT_TOOL_PATH) + " susceptibility --data " + kFixture +
                          " --out " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  const int bad = std::system((std::string(LRT_TOOL_PATH) + " backbone --data " + kFixture +
                               " --p 2 --out " + out.string() + " 2>/dev/null")
                                  .c_str());
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}
