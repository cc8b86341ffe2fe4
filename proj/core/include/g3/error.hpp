#pragma once

#include <stdexcept>
#include <string>

namespace g3 {

enum class ErrorCode {
  UnknownLabel,
  DimensionMismatch,
  RankTooLow,
  WrongAlgebra,
  CommutatorNonzero,
  TooLarge,
  SubspaceSplitFailed,
  TooSmall,
  SingularY,
  SingularYEncountered,
  NoConvergence,
  ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace g3
