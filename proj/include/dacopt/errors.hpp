#pragma once

#include <stdexcept>
#include <string>

namespace dacopt {

// CLI exit codes, shared with the error taxonomy below.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInternal = 4;

// Malformed input: bad files, out-of-range parameters, capacity guards.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed problem that has no solution (incomplete basis, L < N).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Violated internal invariant; a bug, not a user error.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

int exit_code_for(const std::exception& e);

}  // namespace dacopt
