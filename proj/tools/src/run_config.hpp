#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace g3::cli {

struct RunConfig {
  std::string command;
  std::string alg = "su2";
  std::string aux;  // empty: "v" on su2, "pair" otherwise
  int N = 16;
  std::string signature = "euclid";
  std::string deriv = "spectral";
  std::vector<std::int64_t> seeds{1};
  std::optional<double> amp;  // default depends on the command
  std::optional<double> tol;
  double penalty = 0.1;
  int max_iters = 50;
  int continuation = 0;
  bool convergence = false;
  std::string json;  // report path
  std::string out;   // snapshot path (solve)
  std::string init;  // starting snapshot (solve)
  std::string csv;   // summary path (report)
  std::vector<std::string> inputs;  // report files

  std::string aux_or_default() const;
  void validate() const;  // ConfigError
};

// Keys mirror the long flag names; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
nlohmann::ordered_json to_json(const RunConfig& c);

}  // namespace g3::cli
