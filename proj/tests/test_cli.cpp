#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "packlp/cli.hpp"
#include "packlp/error.hpp"

using namespace packlp;
using cli::RunConfig;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "packlp_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

int run(const RunConfig& c, std::string* out_text = nullptr, std::string* log_text = nullptr) {
  std::ostringstream out, log;
  const int code = cli::run(c, out, log);
  if (out_text) *out_text = out.str();
  if (log_text) *log_text = log.str();
  return code;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(PACKLP_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = "transform";
  c.geometry = "sphere";
  c.n = 4;
  c.measure_scale = 0.1 + 0.2;
  c.theta = 1.0 / 3.0;
  c.seed = 0xffffffffffffULL;
  c.csv = "grid.csv";
  const auto text = cli::to_json(c).dump();
  CHECK(cli::config_from_json(io::json::parse(text)) == c);
  CHECK(cli::to_json(cli::config_from_json(io::json::parse(text))).dump() == text);

  CHECK_THROWS_AS(cli::config_from_json(io::json::parse(R"({"radius": 1, "colour": 2})")), Error);
  CHECK_THROWS_AS(cli::config_from_json(io::json::parse(R"({"radius": "wide"})")), Error);
  CHECK(cli::config_from_json(io::json::parse(R"({"radius": 0.25})")).radius == 0.25);
}

TEST_CASE("validation maps to the usage exit code") {
  RunConfig c;
  c.command = "bound";
  auto bad = [&](auto edit) {
    RunConfig d = c;
    edit(d);
    return run(d);
  };
  CHECK(bad([](RunConfig& d) { d.budget = 0; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) { d.radius = -1.0; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) { d.w2_tolerance = 0.0; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) { d.geometry = "torus"; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) { d.family = "wavelet"; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) { d.command = "solve"; }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) {
          d.command = "density";
          d.lattice = "Z:9";
        }) == cli::kUsage);
  CHECK(bad([](RunConfig& d) {
          d.command = "certify";
          d.input = "/nonexistent/cert.json";
        }) == cli::kUsage);
}

TEST_CASE("density and kissing") {
  RunConfig c;
  c.command = "density";
  std::string out;
  REQUIRE(run(c, &out) == cli::kOk);
  auto j = io::json::parse(out);
  CHECK(j["density"].get<double>() == doctest::Approx(0.9068996821171089).epsilon(1e-13));
  CHECK(j["lambda1"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));

  c.command = "kissing";
  c.n = 2;
  REQUIRE(run(c, &out) == cli::kOk);
  j = io::json::parse(out);
  CHECK(j["bound"].get<double>() >= 12.0);
  CHECK(j["bound"].get<double>() <= 13.2);
  CHECK(j["lower_anchor"]["points"] == 12);
}

TEST_CASE("bound then certify, byte-identical across runs") {
  const auto dir = scratch_dir();
  RunConfig c;
  c.command = "bound";
  c.geometry = "euclidean";
  c.n = 2;
  c.output = (dir / "a.json").string();
  std::string out, log;
  REQUIRE(run(c, &out, &log) == cli::kOk);
  CHECK(log.find("flag: relative_lp_margins") != std::string::npos);
  const double bound = io::json::parse(out)["bound"].get<double>();
  CHECK(bound > 0.9068996821171089);
  CHECK(bound < 0.96);

  c.output = (dir / "b.json").string();
  REQUIRE(run(c, &out) == cli::kOk);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  RunConfig v;
  v.command = "certify";
  v.input = (dir / "a.json").string();
  REQUIRE(run(v, &out) == cli::kOk);
  const auto j = io::json::parse(out);
  CHECK(j["status"] == "certified");
  CHECK(j["bound_agrees"] == true);

  // A tampered coefficient must be caught.
  auto doc = io::read_file(v.input);
  doc["coefficients"][0] = doc["coefficients"][0].get<double>() * 1.5 + 0.1;
  io::write_file((dir / "bad.json").string(), doc);
  v.input = (dir / "bad.json").string();
  CHECK(run(v, &out) == cli::kFailure);
}

TEST_CASE("custom re-check policy is stored and replayed") {
  const auto dir = scratch_dir();
  RunConfig c;
  c.command = "bound";
  c.geometry = "sphere";
  c.n = 2;
  c.radius = 0.5235987755982988;
  c.degree = 8;
  c.seed = 12345;
  c.random_points = 500;
  c.output = (dir / "s.json").string();
  REQUIRE(run(c) == cli::kOk);
  const auto doc = io::read_file(c.output);
  CHECK(doc["certification"]["policy"]["seed"] == 12345);
  CHECK(doc["certification"]["policy"]["random_points"] == 500);
  RunConfig v;
  v.command = "certify";
  v.input = c.output;
  CHECK(run(v) == cli::kOk);
}

TEST_CASE("budget exhaustion is a numeric failure") {
  RunConfig c;
  c.command = "bound";
  c.geometry = "sphere";
  c.n = 2;
  c.radius = 0.5235987755982988;
  c.degree = 1;
  c.budget = 1;
  c.output = (scratch_dir() / "never.json").string();
  std::string out;
  CHECK(run(c, &out) == cli::kFailure);
  CHECK(io::json::parse(out)["status"] == "budget_exhausted");
}

TEST_CASE("transform and abel commands") {
  const auto dir = scratch_dir();
  RunConfig c;
  c.command = "transform";
  c.geometry = "euclidean";
  c.n = 3;
  c.to = 2.0;
  c.step = 1.0;
  c.csv = (dir / "t.csv").string();
  std::string out;
  REQUIRE(run(c, &out) == cli::kOk);
  auto j = io::json::parse(out);
  REQUIRE(j["values"].size() == 3);
  CHECK(j["values"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  const auto csv = slurp(dir / "t.csv");
  CHECK(csv.rfind("point,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  c.command = "abel";
  c.geometry = "hyperbolic";
  c.direction = "inverse";
  c.csv.clear();
  REQUIRE(run(c, &out) == cli::kOk);
  CHECK(io::json::parse(out)["roundtrip_error"].get<double>() < 1e-8);
  c.direction = "sideways";
  CHECK(run(c) == cli::kUsage);
  c.direction = "forward";
  c.geometry = "euclidean";
  CHECK(run(c) == cli::kUsage);
}

TEST_CASE("selftest") {
  RunConfig c;
  c.command = "selftest";
  std::string out;
  CHECK(run(c, &out) == cli::kOk);
  CHECK(out.find("FAIL") == std::string::npos);
  c.target = "abel";
  CHECK(run(c, &out) == cli::kOk);
  CHECK(out.find("specfun") == std::string::npos);
  c.target = "nothing";
  CHECK(run(c) == cli::kUsage);
}

TEST_CASE("executable exit codes and config files") {
  CHECK(shell("density A2") == 0);
  CHECK(shell("") == 2);
  CHECK(shell("density --no-such-flag") == 2);
  CHECK(shell("bound --budget 0") == 2);
  CHECK(shell("--help") == 0);

  const auto cfg = scratch_dir() / "cfg.json";
  std::ofstream(cfg) << R"({"lattice": "D4"})";
  std::ostringstream args;
  args << "--config " << cfg.string() << " --dump-config density";
  CHECK(shell(args.str()) == 0);
  std::ofstream(cfg) << R"({"lattice": 4})";
  CHECK(shell("--config " + cfg.string() + " density") == 2);
  CHECK(std::system(("PACKLP_THREADS=zero " + std::string(PACKLP_EXE) + " density > /dev/null 2>&1").c_str()) != 0);
}
