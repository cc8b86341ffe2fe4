#include "g3/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "g3/error.hpp"

namespace g3 {

ResidualReport ResidualReport::check(std::string name, double residual, double scale, double tolerance) {
  ResidualReport r;
  r.name = std::move(name);
  r.residual = residual;
  r.scale = scale;
  r.tolerance = tolerance;
  r.pass = std::isfinite(residual) && residual <= tolerance * scale;
  return r;
}

ResidualReport ResidualReport::expect_above(std::string name, double residual, double scale, double tolerance) {
  ResidualReport r = check(std::move(name), residual, scale, tolerance);
  r.expect_failure = true;
  r.pass = std::isfinite(residual) && residual > tolerance * scale;
  return r;
}

ResidualReport& ResidualReport::with(const std::string& alg, std::optional<std::int64_t> s, int n,
                                     const std::string& mode) {
  algebra = alg;
  seed = s;
  N = n;
  deriv_mode = mode;
  return *this;
}

namespace {
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}
}  // namespace

nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["residual"] = number(r.residual);
  j["scale"] = number(r.scale);
  j["tolerance"] = number(r.tolerance);
  j["pass"] = r.pass;
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  j["algebra"] = r.algebra;
  j["N"] = r.N ? nlohmann::json(r.N) : nlohmann::json(nullptr);
  j["deriv_mode"] = r.deriv_mode.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.deriv_mode);
  if (r.expect_failure) j["expect"] = "fail";
  if (!r.suite.empty()) j["suite"] = r.suite;
  return j;
}

ResidualReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "report entry is not an object");
  try {
    ResidualReport r;
    r.name = j.at("name").get<std::string>();
    auto num = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    r.residual = num("residual");
    r.scale = num("scale");
    r.tolerance = num("tolerance");
    r.pass = j.at("pass").get<bool>();
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::int64_t>();
    r.algebra = j.at("algebra").get<std::string>();
    if (!j.at("N").is_null()) r.N = j.at("N").get<int>();
    if (!j.at("deriv_mode").is_null()) r.deriv_mode = j.at("deriv_mode").get<std::string>();
    r.expect_failure = j.value("expect", std::string()) == "fail";
    r.suite = j.value("suite", std::string());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed report entry: ") + e.what());
  }
}

void ReportMatrix::add(const ResidualReport& r0, const std::string& default_suite) {
  ResidualReport r = r0;
  if (r.suite.empty()) r.suite = default_suite;
  Key key{r.suite, r.algebra, r.seed ? std::to_string(*r.seed) : "-", r.name};
  auto it = rows.find(key);
  if (it != rows.end()) {
    std::ostringstream w;
    w << "warning: duplicate key (" << std::get<0>(key) << ", " << std::get<1>(key) << ", " << std::get<2>(key) << ", "
      << std::get<3>(key) << "); keeping the later entry";
    warnings.push_back(w.str());
    it->second = r;
  } else {
    rows.emplace(key, r);
  }
}

bool ReportMatrix::all_pass() const {
  for (const auto& [k, r] : rows)
    if (!r.pass) return false;
  return true;
}

std::string ReportMatrix::text() const {
  std::ostringstream o;
  std::size_t fails = 0;
  for (const auto& [k, r] : rows) {
    o << (r.pass ? "PASS " : "FAIL ") << std::get<0>(k) << " " << std::get<1>(k) << " seed=" << std::get<2>(k) << " "
      << std::get<3>(k) << " residual=" << std::setprecision(3) << std::scientific << r.residual << "\n";
    fails += !r.pass;
  }
  o << rows.size() << " entries, " << fails << " failing\n";
  return o.str();
}

std::string ReportMatrix::csv() const {
  std::ostringstream o;
  o << "suite,algebra,seed,name,residual,scale,tolerance,pass\n";
  o << std::setprecision(17);
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& [k, r] : rows)
    o << quote(std::get<0>(k)) << "," << quote(std::get<1>(k)) << "," << std::get<2>(k) << "," << quote(std::get<3>(k))
      << "," << r.residual << "," << r.scale << "," << r.tolerance << "," << (r.pass ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace g3
