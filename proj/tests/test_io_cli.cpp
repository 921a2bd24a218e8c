#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mms/cli.hpp"
#include "mms/error.hpp"
#include "mms/generators.hpp"
#include "mms/io.hpp"
#include "oracles.hpp"

using namespace mms;
namespace fs = std::filesystem;

namespace {
fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "mms_io_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "mms");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::dispatch(static_cast<int>(argv.size()), argv.data());
}
}  // namespace

TEST_CASE("doubles round-trip through their shortest form") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(oracle::uniform(rng, -1.0, 1.0), oracle::uniform_int(rng, -300, 300));
    const std::string s = io::format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(INFINITY) == "inf");
  CHECK(io::format_double(-INFINITY) == "-inf");
  CHECK(io::format_double(NAN) == "nan");
  CHECK(io::number(INFINITY) == io::Json("inf"));
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    io::parse_json("{\n  \"a\": [1, 2,,]\n}", "cfg");
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).rfind("cfg:2:", 0) == 0);
  }
}

TEST_CASE("graphs and models round-trip byte for byte") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const SpaceGraph g = oracle::random_connected_graph(rng, oracle::uniform_int(rng, 2, 20), 5);
    const std::string once = io::dump(io::to_json(g));
    const std::string twice = io::dump(io::to_json(io::graph_from_json(io::parse_json(once))));
    CHECK(once == twice);
  }
  const SpaceGraph grid = gen::grid(2, 3, true);
  const std::string a = io::dump(io::to_json(grid));
  const SpaceGraph back = io::graph_from_json(io::parse_json(a));
  CHECK(io::dump(io::to_json(back)) == a);
  CHECK(back.has_positions());
  CHECK(back.max_radius() == doctest::Approx(grid.max_radius()));

  const std::vector<ModelSpace> models{
      {AhlforsModel{2.5, 0.5}, std::nullopt, 0},
      {WeightedHalfLine{RadialFunction::power(2.0, 0.5)}, AsymptoticClass::polynomial(1.5), -2},
      {PowerWeightedEuclidean{3, -1.25}, std::nullopt, 1},
      {KRegularTree{3, RadialFunction::exponential(1.0, -0.5), RadialFunction::constant(2.0)}, std::nullopt, 0},
  };
  for (const ModelSpace& m : models) {
    const std::string s = io::dump(io::to_json(m));
    CHECK(io::is_model_json(io::parse_json(s)));
    const ModelSpace back_m = io::model_from_json(io::parse_json(s));
    CHECK(io::dump(io::to_json(back_m)) == s);
    CHECK(back_m.ball_measure(3.0) == m.ball_measure(3.0));
  }
}

TEST_CASE("csv layout") {
  io::Csv csv({"a", "b"});
  csv.comment("p", "2");
  csv.row().add(1).add(0.5);
  csv.row().add("x,y").add(true);
  const std::string s = csv.str();
  CHECK(s.rfind("# p=2\n", 0) == 0);
  CHECK(s.find("a,b\n") != std::string::npos);
  CHECK(s.find("1,0.5\n") != std::string::npos);
  CHECK(s.find("\"x,y\",true\n") != std::string::npos);
}

TEST_CASE("command line") {
  const fs::path dir = scratch();
  const std::string hl = (dir / "hl.json").string();
  const std::string line = (dir / "line.json").string();

  CHECK(run({"no-such-command"}) == cli::UsageError);
  CHECK(run({"--help"}) == cli::Success);
  REQUIRE(run({"generate", "halfline", "--length", "64", "--out", hl}) == cli::Success);
  REQUIRE(run({"generate", "line", "--half-length", "32", "--out", line}) == cli::Success);
  CHECK(io::graph_from_json(io::load_json(hl)).size() == 65);

  SUBCASE("criteria on the half-line") {
    const std::string out = (dir / "crit.csv").string();
    CHECK(run({"criteria", "--space", hl, "--p", "1,2", "--out", out}) == cli::Success);
    const std::string csv = slurp(out);
    CHECK(csv.find("functional,p,j,term,partial,classification,basis,value") != std::string::npos);
    CHECK(csv.find("# threads=") != std::string::npos);
    CHECK(csv.find("script_R,1,0,1,1,finite") != std::string::npos);
  }
  SUBCASE("modulus of a condenser") {
    const std::string out = (dir / "mod.json").string();
    CHECK(run({"modulus", "--space", hl, "--p", "2", "--R", "16", "--out", out}) == cli::Success);
    const io::Json j = io::load_json(out);
    CHECK(j.at("status") == "converged");
    CHECK(j.at("value").get<double>() == doctest::Approx(1.0 / 14.5).epsilon(1e-6));
    CHECK(j.contains("settings"));
  }
  SUBCASE("chain check fails on two ends") {
    CHECK(run({"chain-check", "--space", line, "--radii", "8,16", "--out", (dir / "ch.json").string()}) ==
          cli::CheckFailed);
  }
  SUBCASE("counterexample refuses a finite series") {
    const std::string out = (dir / "cx.json").string();
    CHECK(run({"counterexample", "--space", hl, "--p", "1", "--out", out}) == cli::CheckFailed);
  }
  SUBCASE("malformed input is a usage error") {
    const std::string bad = (dir / "bad.json").string();
    spit(bad, "{ \"nodes\": [ }");
    CHECK(run({"criteria", "--space", bad, "--p", "2", "--out", "-"}) == cli::UsageError);
    CHECK(run({"criteria", "--space", (dir / "missing.json").string(), "--p", "2"}) == cli::UsageError);
  }
  SUBCASE("flags override the config file") {
    const std::string cfg = (dir / "cfg.json").string();
    spit(cfg, "{\"p\": 2, \"R\": 8}");
    const std::string out = (dir / "mod2.json").string();
    CHECK(run({"modulus", "--space", hl, "--config", cfg, "--R", "16", "--out", out}) == cli::Success);
    const io::Json j = io::load_json(out);
    CHECK(std::stod(j.at("settings").at("R").get<std::string>()) == 16.0);
    CHECK(std::stod(j.at("settings").at("p").get<std::string>()) == 2.0);
  }
}
