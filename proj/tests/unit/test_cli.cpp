#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "minact/cli/artifacts.hpp"
#include "minact/cli/commands.hpp"
#include "minact/cli/config.hpp"

namespace fs = std::filesystem;
using namespace minact::cli;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("minact_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(MINACT_TOOL) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_path(const std::string& name) { return std::string(MINACT_CONFIG_DIR) + "/" + name; }

int run(const std::string& command, const json& cfg, const fs::path& out, std::string* err_text = nullptr) {
  std::ostringstream log, err;
  const int code = run_command(command, cfg, out.string(), log, err);
  if (err_text) *err_text = err.str();
  return code;
}

const char* kSmallPairwise = R"({
  "density": {"kind": "gaussian"},
  "solver": {"alpha": 1.0, "lambda": 1e5},
  "pairs": [{"x0": [-1.2, 0.3], "x1": [1.1, 0.4]}],
  "samples": 11
})";

}  // namespace

TEST_CASE("sha256 and number formatting") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(std::stod(fmt(M_PI)) == M_PI);
}

TEST_CASE("config parsing and overrides") {
  json cfg = parse_config_text(R"({"solver": {"lambda": 1e5}, "name": "x"})");
  apply_override(cfg, "solver.lambda=20");
  apply_override(cfg, "solver.extra.deep=true");
  apply_override(cfg, "name=hello world");
  CHECK(cfg["solver"]["lambda"].get<double>() == 20.0);
  CHECK(cfg["solver"]["extra"]["deep"].get<bool>());
  CHECK(cfg["name"].get<std::string>() == "hello world");
  CHECK_THROWS_AS(apply_override(cfg, "novalue"), ConfigError);

  try {
    parse_config_text("{\n  \"a\": 1,\n  oops\n}");
    FAIL("expected a syntax error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
}

TEST_CASE("sections reject unknown keys and bad values") {
  const json node = json::parse(R"({"alpha": 1, "lambda": -3, "typo": 2})");
  Section s(node, "solver");
  CHECK(s.number("alpha") == 1.0);
  CHECK_THROWS_AS(s.positive("lambda", 1.0), ConfigError);
  try {
    s.finish();
    FAIL("expected unknown key");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "solver.typo");
  }
}

TEST_CASE("malformed config exits with code 2 and writes nothing") {
  const fs::path out = scratch_dir("bad_lambda");
  json cfg = parse_config_text(kSmallPairwise);
  cfg["solver"]["lambda"] = -1.0;
  std::string err;
  CHECK(run("pairwise", cfg, out, &err) == kConfigError);
  CHECK(err.find("solver.lambda") != std::string::npos);
  CHECK(!fs::exists(out));

  json unknown = parse_config_text(kSmallPairwise);
  unknown["solver"]["lamda"] = 3.0;
  CHECK(run("pairwise", unknown, out, &err) == kConfigError);
  CHECK(err.find("solver.lamda") != std::string::npos);
  CHECK(!fs::exists(out));
}

TEST_CASE("pairwise command writes its artifacts and manifest") {
  const fs::path out = scratch_dir("pairwise");
  const json cfg = parse_config_text(kSmallPairwise);
  REQUIRE(run("pairwise", cfg, out) == kOk);
  for (const char* f : {"pairwise_summary.csv", "pairwise_paths.csv", "pairwise_history.csv", "manifest.json"})
    CHECK(fs::exists(out / f));
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "pairwise");
  CHECK(manifest["config_sha256"] == sha256_hex(cfg.dump()));
  CHECK(manifest["artifact_list"].size() == 3);
  for (const auto& entry : fs::directory_iterator(out)) CHECK(entry.path().extension() != ".tmp");

  // Same config, same bytes.
  const fs::path again = scratch_dir("pairwise_again");
  REQUIRE(run("pairwise", cfg, again) == kOk);
  for (const char* f : {"pairwise_summary.csv", "pairwise_paths.csv", "pairwise_history.csv"})
    CHECK(slurp(out / f) == slurp(again / f));
}

TEST_CASE("solver divergence exits with code 3 and leaves a snapshot") {
  const fs::path out = scratch_dir("diverge");
  json cfg = parse_config_text(kSmallPairwise);
  cfg["solver"]["backtracking"] = false;
  cfg["solver"]["eta"] = 1.0;
  CHECK(run("pairwise", cfg, out) == kSolverFailure);
  REQUIRE(fs::exists(out / "failure_snapshot.json"));
  const json snap = json::parse(slurp(out / "failure_snapshot.json"));
  CHECK(snap["iteration"].get<int>() > 0);
  CHECK(snap["snapshot"].size() == 22);
  CHECK(!fs::exists(out / "manifest.json"));
}

TEST_CASE("density grid export") {
  const fs::path out = scratch_dir("grid");
  REQUIRE(run_tool("density-grid -c " + config_path("fig2_density_grid.json") + " -o " + out.string()) == kOk);
  std::istringstream csv(slurp(out / "density_grid.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,y,rho,rho_1_5");
  int rows = 0;
  bool consistent = true;
  while (std::getline(csv, line)) {
    ++rows;
    double x, y, rho, r5;
    char c;
    std::istringstream row(line);
    row >> x >> c >> y >> c >> rho >> c >> r5;
    consistent = consistent && rho > 0 && std::abs(r5 - std::pow(rho, 0.2)) <= 1e-12 * r5;
  }
  CHECK(rows == 200 * 200);
  CHECK(consistent);
}

TEST_CASE("command line handling") {
  const fs::path out = scratch_dir("tool");
  CHECK(run_tool("") == kUsage);
  CHECK(run_tool("no-such-command -c x.json") == kUsage);
  CHECK(run_tool("pairwise -c /nonexistent/config.json -o " + out.string()) == kConfigError);
  CHECK(run_tool("pairwise -c " + config_path("fig1_pairwise.json") + " -o " + out.string() +
                 " --set solver.lambda=-5") == kConfigError);
  CHECK(!fs::exists(out));
  REQUIRE(run_tool("pairwise -c " + config_path("fig1_pairwise.json") + " -o " + out.string() +
                   " --seed 5 --set samples=21") == kOk);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["seed"] == 5);
}

TEST_CASE("validate command against the shooting oracle") {
  const fs::path out = scratch_dir("validate");
  REQUIRE(run_tool("validate -c " + config_path("fig1_validate.json") + " -o " + out.string()) == kOk);
  const json report = json::parse(slurp(out / "validate_report.json"));
  CHECK(report["pairs"] == 5);
  CHECK(report["within_threshold"].get<bool>());
  CHECK(report["max_action_rel_error"].get<double>() < 1e-3);

  json bad = load_config_file(config_path("fig1_validate.json"));
  bad["solver"]["alpha"] = 2.0;
  CHECK(run("validate", bad, scratch_dir("validate_bad")) == kConfigError);
}
