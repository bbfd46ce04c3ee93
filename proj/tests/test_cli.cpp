#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "config.hpp"
#include "doctest.h"
#include "randcrit/common.hpp"

using namespace randcrit;
using namespace randcrit::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& err = "/dev/null") {
  const std::string cmd = std::string(RANDCRIT_CLI) + " " + args + " >/dev/null 2>" + err.string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("randcrit_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

// drop the leading "# config_hash=..." line
std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

}  // namespace

TEST_CASE("config json round trip") {
  ExperimentConfig c;
  c.command = "attractors";
  c.degrees = {3, 9};
  c.zmax = 2.25;
  c.seed = 99;
  c.x0 = -0.25;
  c.prefilter = false;
  const auto j = to_json(c);
  const auto back = config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("config hash ignores threads and out only") {
  ExperimentConfig a;
  a.command = "density";
  ExperimentConfig b = a;
  b.threads = 8;
  b.out = "/somewhere/else";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_THROWS_AS(parse_grid("1:2", c), Error);
  CHECK_THROWS_AS(parse_region("0:1:a:2", c), Error);
  parse_region("-0.1:0.2:1.5:3", c);
  CHECK(c.x0 == -0.1);
  CHECK(c.y1 == 3.0);
  parse_grid("-2:2:8", c);
  CHECK(c.grid_n == 8);

  ExperimentConfig bad;
  bad.command = "nonsense";
  CHECK_THROWS_AS(validate(bad), Error);
  ExperimentConfig flux;
  flux.command = "flux-vacua";
  flux.model = "rigid";
  flux.x0 = 0.3, flux.x1 = 0.7, flux.y0 = 1, flux.y1 = 2;
  CHECK_THROWS_AS(validate(flux), Error);
  ExperimentConfig zeros;
  zeros.command = "zeros-mc";
  zeros.samples = 0;
  CHECK_THROWS_AS(validate(zeros), Error);
}

TEST_CASE("density output matches independently computed goldens") {
  const auto out = scratch("golden");
  REQUIRE(run("density --ensemble kac -N 4 --grid -1.5:1.5:3 --out " + (out / "kac").string()) == 0);
  REQUIRE(run("density --ensemble kostlan -N 7 --grid -2:2:4 --out " + (out / "kos").string()) == 0);
  const std::string golden = RANDCRIT_GOLDEN_DIR;
  const auto kac = slurp(out / "kac" / "density.csv");
  CHECK(kac.rfind("# config_hash=", 0) == 0);
  CHECK(body(kac) == slurp(golden + "/density_kac_N4.csv"));
  CHECK(body(slurp(out / "kos" / "density.csv")) == slurp(golden + "/density_kostlan_N7.csv"));

  // the summary echoes the hash that heads the CSV
  const auto summary = nlohmann::json::parse(slurp(out / "kac" / "summary.json"));
  CHECK(kac.substr(14, 16) == summary.at("config_hash").get<std::string>());
  const auto cfg = config_from_json(summary.at("config"));
  CHECK(config_hash(cfg) == summary.at("config_hash").get<std::string>());
  fs::remove_all(out);
}

TEST_CASE("errors come back as JSON with stable codes") {
  const auto out = scratch("errors");
  fs::create_directories(out);
  const auto err = out / "stderr.txt";

  CHECK(run("flux-vacua --region 0.3:0.7:1:2 --out " + (out / "a").string(), err) == 2);
  auto j = nlohmann::json::parse(slurp(err));
  CHECK(j.at("error").at("code") == "domain_error");
  CHECK_FALSE(fs::exists(out / "a" / "flux_vacua.csv"));

  CHECK(run("density --ensemble kostlan -N 5000 --out " + (out / "b").string(), err) == 2);
  j = nlohmann::json::parse(slurp(err));
  CHECK(j.at("error").at("code") == "overflow");

  CHECK(run("zeros-mc -N 0 --out " + (out / "c").string(), err) == 2);
  j = nlohmann::json::parse(slurp(err));
  CHECK(j.at("error").contains("message"));

  CHECK(run("attractors --zmax 0 --box 2 --out " + (out / "d").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(out / "d" / "count_report.json"));
  CHECK(rep.at("count") == 0);
  fs::remove_all(out);
}

TEST_CASE("config file reproduces a run") {
  const auto out = scratch("rerun");
  REQUIRE(run("flux-vacua --lmax 20 --box 8 --bins 5 --threads 2 --out " + (out / "a").string()) == 0);
  REQUIRE(run("flux-vacua --config " + (out / "a" / "summary.json").string() + " --threads 1 --out " +
              (out / "b").string()) == 0);
  for (const char* f : {"flux_vacua.csv", "count_report.json", "w2_histogram.csv", "w2_stats.json"})
    CHECK(slurp(out / "a" / f) == slurp(out / "b" / f));
  fs::remove_all(out);
}
