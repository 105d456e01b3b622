#pragma once

#include <stdexcept>
#include <string>

namespace degwave {

enum class ErrorCode {
  invalid_argument = 1,
  hypothesis_violation,
  mesh_mismatch,
  boundary_violation,
  solver_breakdown,
  cg_stagnation,
  io_error,
  config_error,
};

/// Base exception for everything thrown by the library. The code is what
/// crosses the C boundary; the message is kept for diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace degwave
