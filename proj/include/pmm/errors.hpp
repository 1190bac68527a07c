#pragma once

#include <stdexcept>
#include <string>

namespace pmm {

// Process exit codes used by the CLI and mirrored by the exception types below.
enum ExitCode {
  kExitOk = 0,
  kExitMismatch = 1,   // verify: solution file does not match recomputation
  kExitUser = 2,       // parse / validation / usage errors
  kExitInfeasible = 3, // LP relaxation infeasible
  kExitInternal = 4,   // an internal invariant (ledger row, structure check) failed
};

struct PmmError : std::runtime_error {
  int exit_code;
  PmmError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
};

struct ParseError : PmmError {
  explicit ParseError(const std::string& msg) : PmmError(kExitUser, msg) {}
};

struct ValidationError : PmmError {
  explicit ValidationError(const std::string& msg) : PmmError(kExitUser, msg) {}
};

struct InfeasibleError : PmmError {
  explicit InfeasibleError(const std::string& msg) : PmmError(kExitInfeasible, msg) {}
};

struct InternalError : PmmError {
  explicit InternalError(const std::string& msg) : PmmError(kExitInternal, msg) {}
};

// Internal sanity check; failures indicate a bug, not bad input.
inline void check_internal(bool ok, const std::string& msg) {
  if (!ok) throw InternalError(msg);
}

}  // namespace pmm
