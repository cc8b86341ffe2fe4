#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace g3::cli {

// Exit codes: 0 all entries pass, 1 a suite failed (or the solver did not converge),
// 2 configuration or input error.
struct CommandResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
};

CommandResult cmd_verify_algebra(const RunConfig& cfg, std::ostream& log);
CommandResult cmd_verify_identities(const RunConfig& cfg, std::ostream& log);
CommandResult cmd_solve(const RunConfig& cfg, std::ostream& log);
// Prints the merged matrix; writes cfg.csv when set.
CommandResult cmd_report(const RunConfig& cfg, std::ostream& log);

// Dispatches on cfg.command, maps g3::Error to exit 2 (1 for SingularY and NoConvergence)
// and writes cfg.json when set.
int run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace g3::cli
