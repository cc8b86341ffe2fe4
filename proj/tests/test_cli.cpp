#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "g3/error.hpp"
#include "run_config.hpp"

using namespace g3::cli;

namespace {

std::string tmp(const std::string& name) { return "g3_test_cli_" + name; }

int run_quiet(const RunConfig& c, std::string* out = nullptr) {
  std::ostringstream log, err;
  const int code = run(c, log, err);
  if (out) *out = log.str() + err.str();
  return code;
}

RunConfig command(const std::string& name) {
  RunConfig c;
  c.command = name;
  return c;
}

}  // namespace

TEST_CASE("config file values and validation") {
  const RunConfig c = config_from_json(nlohmann::json{{"alg", "so4"}, {"seeds", {3, 5}}, {"tol", 1e-9}});
  CHECK(c.alg == "so4");
  CHECK(c.seeds == std::vector<std::int64_t>{3, 5});
  CHECK(*c.tol == 1e-9);
  CHECK(c.aux_or_default() == "pair");
  CHECK(command("x").aux_or_default() == "v");
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"nope", 1}}), g3::Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"N", "sixteen"}}), g3::Error);
  RunConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), g3::Error);
}

TEST_CASE("verify-algebra exit codes") {
  RunConfig c = command("verify-algebra");
  c.seeds = {7};
  CHECK(run_quiet(c) == 0);

  c.alg = "so5";
  c.aux = "ccv";
  std::string out;
  CHECK(run_quiet(c, &out) == 0);
  CHECK(out.find("expected failure") != std::string::npos);

  c.alg = "nonsense";
  CHECK(run_quiet(c) == 2);
  c.alg = "su3";
  c.aux = "v";  // su2-only recipe
  CHECK(run_quiet(c) == 2);
}

TEST_CASE("verify-identities guard and FD convergence") {
  RunConfig c = command("verify-identities");
  c.amp = 0.5;
  CHECK(run_quiet(c) == 1);
  c.amp.reset();
  c.deriv = "central-2";
  c.convergence = true;
  c.json = tmp("conv.json");
  CHECK(run_quiet(c) == 0);
  std::ifstream in(c.json);
  const auto j = nlohmann::json::parse(in);
  REQUIRE(j["slopes"].size() == 1);
  CHECK(j["slopes"][0]["slope"].get<double>() >= 1.9);
  std::remove(c.json.c_str());
}

TEST_CASE("reports are reproducible and merge") {
  RunConfig a = command("verify-identities");
  a.seeds = {1, 2};
  a.N = 8;
  a.json = tmp("a.json");
  RunConfig b = a;
  b.json = tmp("b.json");
  REQUIRE(run_quiet(a) == 0);
  REQUIRE(run_quiet(b) == 0);
  std::ifstream fa(a.json), fb(b.json);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());

  RunConfig v = command("verify-algebra");
  v.json = tmp("v.json");
  REQUIRE(run_quiet(v) == 0);

  RunConfig r = command("report");
  r.inputs = {a.json, v.json};
  r.csv = tmp("m.csv");
  r.json = tmp("m.json");
  CHECK(run_quiet(r) == 0);
  std::ifstream fm(r.json);
  const auto m = nlohmann::json::parse(fm);
  const auto na = nlohmann::json::parse(sa.str())["entries"].size();
  std::ifstream fv(v.json);
  const auto nv = nlohmann::json::parse(fv)["entries"].size();
  CHECK(m["entries"].size() == na + nv);

  // the same file twice: last wins with a warning
  r.inputs = {v.json, v.json};
  std::string out;
  CHECK(run_quiet(r, &out) == 0);
  CHECK(out.find("warning: duplicate key") != std::string::npos);

  r.inputs = {};
  CHECK(run_quiet(r) == 0);

  std::ofstream(tmp("bad.json")) << "{\"entries\": [{\"name\": 1}]}";
  r.inputs = {tmp("bad.json")};
  CHECK(run_quiet(r) == 2);
  for (const auto& f : {a.json, b.json, v.json, r.csv, r.json, tmp("bad.json")}) std::remove(f.c_str());
}

TEST_CASE("solve rejects bad tolerances and FD lattices") {
  RunConfig c = command("solve");
  c.tol = -1.0;
  CHECK(run_quiet(c) == 2);
  c.tol = 1e-8;
  c.deriv = "central-4";
  CHECK(run_quiet(c) == 2);
}
