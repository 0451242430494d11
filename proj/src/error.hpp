#pragma once

#include <stdexcept>
#include <string>

namespace arcflow {

// Numeric values are stable: they are returned verbatim through the C API.
enum class ErrorCode : int {
  InvalidArgument = 1,
  GridMismatch = 2,
  NonFinite = 3,
  PositivityViolation = 4,
  Config = 5,
  Io = 6,
  Format = 7,
  DegenerateInput = 8,
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

}  // namespace arcflow
