#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace g3 {

struct ResidualReport {
  std::string name;
  double residual = 0;
  double scale = 1;
  double tolerance = 0;
  bool pass = false;
  bool expect_failure = false;  // pass means the residual exceeded tolerance·scale
  std::optional<std::int64_t> seed;
  std::string algebra;
  int N = 0;
  std::string deriv_mode;
  std::string suite;

  static ResidualReport check(std::string name, double residual, double scale, double tolerance);
  static ResidualReport expect_above(std::string name, double residual, double scale, double tolerance);
  ResidualReport& with(const std::string& alg, std::optional<std::int64_t> seed, int N = 0,
                       const std::string& mode = "");
};

nlohmann::ordered_json to_json(const ResidualReport& r);
ResidualReport report_from_json(const nlohmann::json& j);

// Pass/fail matrix keyed by (suite, algebra, seed, name); later rows replace earlier ones.
struct ReportMatrix {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, ResidualReport> rows;
  std::vector<std::string> warnings;

  void add(const ResidualReport& r, const std::string& default_suite);
  bool all_pass() const;
  std::string text() const;
  std::string csv() const;
};

}  // namespace g3
