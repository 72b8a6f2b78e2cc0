#pragma once

#include <stdexcept>
#include <string>

namespace gowers {

// Bad arguments or violated preconditions (CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that could not be completed as requested (CLI exit code 1).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An invariant that the mathematics guarantees was observed to fail.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] inline void usage_fail(const std::string& msg) { throw UsageError(msg); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace gowers
