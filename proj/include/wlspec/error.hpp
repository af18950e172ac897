#pragma once

#include <stdexcept>
#include <string>

namespace wlspec {

enum class ErrorCode {
  Domain = 1,       // argument outside the valid range of an operation
  Convergence = 2,  // iterative method failed to converge
  InvalidMesh = 3,
  Config = 4,
  Io = 5,
  Hypothesis = 6,   // theorem hypotheses not satisfied
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace wlspec
