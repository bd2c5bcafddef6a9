// Drives the installed command-line binary through its file interfaces and
// exit-code contract: 0 success, 2 infeasible or detected, 1 input error.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "intersample/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#ifndef INTERSAMPLE_CLI_PATH
#error "INTERSAMPLE_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace intersample;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("intersample-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& args) {
  const std::string command =
      std::string(INTERSAMPLE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("") == 1);
  CHECK(run("analyze") == 1);                            // missing --scenario
  CHECK(run("analyze --scenario /no/such/file.json") == 1);
  CHECK(run("demo no-such-demo") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("demo end to end writes all artifacts") {
  TempDir dir;
  const std::string out = (dir.path / "out").string();
  CHECK(run("demo sec4a --out " + out) == 0);
  for (const char* name :
       {"scenario.json", "report.json", "plan.json", "plan.csv", "trace.csv",
        "verification.json"}) {
    CHECK(fs::exists(dir.path / "out" / name));
  }
  CHECK(slurp(dir.path / "out" / "verification.json").find("\"stealthy\": true") !=
        std::string::npos);

  // the synthetic-shape demo also closes the loop
  const std::string shape_out = (dir.path / "shape").string();
  CHECK(run("demo x38-shape --out " + shape_out) == 0);
  CHECK(slurp(dir.path / "shape" / "verification.json").find("\"disruptive\": true") !=
        std::string::npos);
}

TEST_CASE("analyze, synthesize, simulate, verify through files") {
  TempDir dir;
  const Scenario s = demo_scenario("sec4c");
  const fs::path scenario = dir.path / "scenario.json";
  save_scenario(s, scenario);
  const std::string out = (dir.path / "artifacts").string();

  CHECK(run("analyze --scenario " + scenario.string() + " --out " + out) == 0);
  CHECK(fs::exists(dir.path / "artifacts" / "report.json"));

  CHECK(run("synthesize --scenario " + scenario.string() + " --out " + out) == 0);
  CHECK(fs::exists(dir.path / "artifacts" / "plan.json"));
  const std::string plan = (dir.path / "artifacts" / "plan.json").string();

  CHECK(run("simulate --scenario " + scenario.string() + " --plan " + plan + " --out " + out) ==
        0);
  const fs::path trace = dir.path / "artifacts" / "trace.csv";
  CHECK(fs::exists(trace));

  CHECK(run("verify --scenario " + scenario.string() + " --plan " + plan + " --trace " +
            trace.string() + " --out " + out) == 0);
  CHECK(slurp(dir.path / "artifacts" / "verification.json").find("\"disruptive\": true") !=
        std::string::npos);

  // verify without a trace file simulates internally
  CHECK(run("verify --scenario " + scenario.string() + " --plan " + plan) == 0);
}

TEST_CASE("synthesis artifacts are deterministic across runs") {
  TempDir dir;
  const Scenario s = demo_scenario("sec4a");
  const fs::path scenario = dir.path / "scenario.json";
  save_scenario(s, scenario);
  CHECK(run("synthesize --scenario " + scenario.string() + " --out " +
            (dir.path / "a").string()) == 0);
  CHECK(run("synthesize --scenario " + scenario.string() + " --out " +
            (dir.path / "b").string()) == 0);
  CHECK(slurp(dir.path / "a" / "plan.json") == slurp(dir.path / "b" / "plan.json"));
  CHECK(slurp(dir.path / "a" / "plan.csv") == slurp(dir.path / "b" / "plan.csv"));
}

TEST_CASE("infeasible scenarios exit with 2") {
  TempDir dir;
  Scenario s = demo_scenario("sec4a");
  // square loop sampled at the hold rate: every input direction is visible
  s.name = "square";
  s.A = Matrix::Identity(2, 2) * -1.0;
  s.B = Matrix::Identity(2, 2);
  s.C = Matrix::Identity(2, 2);
  const fs::path scenario = dir.path / "square.json";
  save_scenario(s, scenario);
  CHECK(run("analyze --scenario " + scenario.string()) == 2);
  CHECK(run("synthesize --scenario " + scenario.string() + " --out " + dir.path.string()) == 2);
}

TEST_CASE("timing mismatch is detected and exits with 2") {
  TempDir dir;
  const Scenario s = demo_scenario("sec4c-mismatch");
  const fs::path scenario = dir.path / "scenario.json";
  save_scenario(s, scenario);
  const std::string out = (dir.path / "artifacts").string();
  CHECK(run("synthesize --scenario " + scenario.string() + " --out " + out) == 0);
  const std::string plan = (dir.path / "artifacts" / "plan.json").string();
  CHECK(run("verify --scenario " + scenario.string() + " --plan " + plan + " --out " + out) ==
        2);
  CHECK(slurp(dir.path / "artifacts" / "verification.json").find("\"stealthy\": false") !=
        std::string::npos);
}

TEST_CASE("flag overrides reach the pipeline") {
  TempDir dir;
  const Scenario s = demo_scenario("sec4a");
  const fs::path scenario = dir.path / "scenario.json";
  save_scenario(s, scenario);
  const std::string out = (dir.path / "k0").string();
  CHECK(run("synthesize --scenario " + scenario.string() + " --out " + out +
            " --clusters 0") == 0);
  CHECK(slurp(dir.path / "k0" / "plan.csv") == "i,t_start,a_1,a_2\n");

  // pinning the disruption time to a workable candidate still succeeds
  CHECK(run("analyze --scenario " + scenario.string() + " --t-star 1/1") == 0);
  // an unusable t_star string is an input error
  CHECK(run("analyze --scenario " + scenario.string() + " --t-star nonsense") == 1);
}

TEST_CASE("environment variables mirror the flags") {
  TempDir dir;
  const Scenario s = demo_scenario("sec4a");
  const fs::path scenario = dir.path / "scenario.json";
  save_scenario(s, scenario);
  const std::string out = (dir.path / "env").string();
  const std::string command = "INTERSAMPLE_CLUSTERS=0 " + std::string(INTERSAMPLE_CLI_PATH) +
                              " synthesize --scenario " + scenario.string() + " --out " + out +
                              " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(dir.path / "env" / "plan.csv") == "i,t_start,a_1,a_2\n");
}
