#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qdyn/cli.hpp"
#include "qdyn/errors.hpp"

using namespace qdyn;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("qdyn-cli-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "qdyn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("grid specs") {
    RunConfig cfg;
    parse_grid("0.10:0.25:1/200", cfg);
    CHECK(cfg.t_min == Rational(1, 10));
    CHECK(cfg.t_max == Rational(1, 4));
    CHECK(cfg.t_step == Rational(1, 200));
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(parse_grid("0.1:0.2", cfg), ConfigError);
    CHECK_THROWS_AS(parse_grid("0.1:0.2:0.1:3", cfg), ConfigError);
    CHECK_THROWS_AS(parse_grid("a:b:c", cfg), ConfigError);
    parse_grid("0.3:0.2:0.01", cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    parse_grid("0.1:0.2:-0.01", cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("minima table") {
    RunConfig cfg;
    cfg.count = 3;
    std::ostringstream out;
    CHECK(cmd_minima(cfg, out) == kExitOk);
    const std::string s = out.str();
    CHECK(s.rfind("i,M_i,decimal,gap_to_t_inf,above_t_inf\n1,1/4,", 0) == 0);
    CHECK(s.find("\n3,19/121,") != std::string::npos);
    CHECK(s.find("t_inf,") != std::string::npos);
    cfg.D = 2;
    CHECK_THROWS_AS(cmd_minima(cfg, out), ConfigError);
  }

  TEST_CASE("curve writes CSV and manifest") {
    const fs::path dir = scratch_dir();
    CHECK(run({"curve", "--D", "5", "--n", "2", "--t", "0.10:0.25:0.005", "--out", (dir / "c.csv").string(),
               "--manifest", (dir / "m.json").string()}) == kExitOk);
    const std::string csv = slurp(dir / "c.csv");
    CHECK(csv.rfind("t_num,t_den,n,trapped_count,alphabet_size,entropy,dim_upper,empty_flag\n1,10,2,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);
    const auto m = nlohmann::json::parse(slurp(dir / "m.json"));
    CHECK(m["D"] == 5);
    CHECK(m["M1_bound"] == "3");
    CHECK(m["grid"] == "1/10:1/4:1/200");
    CHECK(m.contains("I"));
    CHECK(m.contains("tool_version"));
    CHECK(m["wall_time_seconds"].get<double>() >= 0.0);
    fs::remove_all(dir);
  }

  TEST_CASE("dumps") {
    const fs::path dir = scratch_dir();
    CHECK(run({"partition-dump", "--D", "5", "--n", "1", "--out", (dir / "p.json").string()}) == kExitOk);
    const auto p = nlohmann::json::parse(slurp(dir / "p.json"));
    CHECK(p["rectangles"].size() == 5);
    CHECK(p["rectangles"][0]["s"][0]["a"].size() == 2);
    CHECK(run({"ik-dump", "--D", "5", "--out", (dir / "i.json").string()}) == kExitOk);
    CHECK(nlohmann::json::parse(slurp(dir / "i.json"))["points"].size() == 19);
    CHECK(run({"sft-export", "--D", "5", "--n", "1", "--t", "0.2", "--out", (dir / "s.txt").string()}) == kExitOk);
    CHECK(slurp(dir / "s.txt").rfind("# D 5\n# t 1/5\n# level 1\n", 0) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"curve", "--D", "4", "--t", "0.1:0.2:0.1"}) == kExitConfig);
    CHECK(run({"curve", "--D", "5", "--t", "0.1:0.2"}) == kExitConfig);
    CHECK(run({"curve", "--D", "5"}) == kExitConfig);
    CHECK(run({"nonsense"}) == kExitConfig);
    CHECK(run({"verify", "--D", "5", "--n", "1", "--perturb"}) == kExitInvariant);
    CHECK(run({"verify", "--D", "5", "--n", "1", "--denom-cap", "4"}) == kExitOk);
    CHECK(run({"partition-dump", "--D", "5", "--out", "/nonexistent-dir/p.json"}) == kExitIo);
    CHECK(run({"curve", "--D", "5", "--n", "1", "--t", "0.1:0.2:0.1", "--m1-bound", "1/10"}) == kExitOk);
  }
}
