// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uwbsim {

enum class ErrorCode {
    Io,
    Parse,
    Validation,
    Config,
    Domain,
    Geometry,
    Solver,
    Protocol,
    Integrity,
    Usage,
    Internal,
};

/// Library-wide exception; carries a coarse code that the C API maps to a status.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &msg)
{
    throw Error(code, msg);
}

inline void require(bool condition, ErrorCode code, const std::string &msg)
{
    if (!condition)
        fail(code, msg);
}

} // namespace uwbsim
