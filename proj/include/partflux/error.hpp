// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_ERROR_HPP
#define PARTFLUX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace partflux
{

// Error classes reported by the library. The CLI prints the class name verbatim so that
// failures are machine-parsable.
enum class ErrorKind
{
  InvalidArgument,
  NotSpd,
  Convergence,
  Instability,
  LayoutMismatch,
  HullViolation,
  Format,
  Io,
};

std::string_view ToString(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string &what)
{
  throw Error(kind, what);
}

inline void Require(bool cond, ErrorKind kind, const std::string &what)
{
  if (!cond)
  {
    throw Error(kind, what);
  }
}

}  // namespace partflux

#endif  // PARTFLUX_ERROR_HPP
