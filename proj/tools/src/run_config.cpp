#include "run_config.hpp"

#include <fstream>
#include <set>

#include "g3/error.hpp"

namespace g3::cli {

std::string RunConfig::aux_or_default() const {
  if (!aux.empty()) return aux;
  return alg == "su2" ? "v" : "pair";
}

void RunConfig::validate() const {
  if (tol && !(*tol > 0)) throw Error(ErrorCode::ConfigError, "--tol must be positive");
  if (amp && !(*amp > 0)) throw Error(ErrorCode::ConfigError, "--amp must be positive");
  if (N < 8) throw Error(ErrorCode::ConfigError, "--N must be at least 8");
  if (continuation < 0) throw Error(ErrorCode::ConfigError, "--continuation must be non-negative");
  if (max_iters < 0) throw Error(ErrorCode::ConfigError, "--max-iters must be non-negative");
  if (penalty < 0) throw Error(ErrorCode::ConfigError, "--penalty must be non-negative");
  if (seeds.empty()) throw Error(ErrorCode::ConfigError, "at least one seed is required");
  if (signature != "euclid" && signature != "lorentz")
    throw Error(ErrorCode::ConfigError, "unknown signature '" + signature + "'");
  if (deriv != "spectral" && deriv != "central-2" && deriv != "central-4")
    throw Error(ErrorCode::ConfigError, "unknown derivative mode '" + deriv + "'");
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  static const std::set<std::string> known{"command", "alg",          "aux",         "N",    "signature", "deriv",
                                           "seeds",   "seed",         "amp",         "tol",  "penalty",   "max-iters",
                                           "continuation", "convergence", "json", "out", "init", "csv", "inputs"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorCode::ConfigError, "unknown config key '" + k + "'");
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("alg")) c.alg = j["alg"].get<std::string>();
    if (j.contains("aux")) c.aux = j["aux"].get<std::string>();
    if (j.contains("N")) c.N = j["N"].get<int>();
    if (j.contains("signature")) c.signature = j["signature"].get<std::string>();
    if (j.contains("deriv")) c.deriv = j["deriv"].get<std::string>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::int64_t>>();
    if (j.contains("seed")) c.seeds = {j["seed"].get<std::int64_t>()};
    if (j.contains("amp")) c.amp = j["amp"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("penalty")) c.penalty = j["penalty"].get<double>();
    if (j.contains("max-iters")) c.max_iters = j["max-iters"].get<int>();
    if (j.contains("continuation")) c.continuation = j["continuation"].get<int>();
    if (j.contains("convergence")) c.convergence = j["convergence"].get<bool>();
    if (j.contains("json")) c.json = j["json"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("init")) c.init = j["init"].get<std::string>();
    if (j.contains("csv")) c.csv = j["csv"].get<std::string>();
    if (j.contains("inputs")) c.inputs = j["inputs"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "config file " + path + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["alg"] = c.alg;
  j["aux"] = c.aux_or_default();
  j["N"] = c.N;
  j["signature"] = c.signature;
  j["deriv"] = c.deriv;
  j["seeds"] = c.seeds;
  j["amp"] = c.amp ? nlohmann::json(*c.amp) : nlohmann::json(nullptr);
  j["tol"] = c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr);
  j["penalty"] = c.penalty;
  j["max-iters"] = c.max_iters;
  j["continuation"] = c.continuation;
  j["convergence"] = c.convergence;
  return j;
}

}  // namespace g3::cli
