// SPDX-License-Identifier: Apache-2.0

#include "partflux/error.hpp"

namespace partflux
{

std::string_view ToString(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::NotSpd:
      return "NotSpd";
    case ErrorKind::Convergence:
      return "Convergence";
    case ErrorKind::Instability:
      return "Instability";
    case ErrorKind::LayoutMismatch:
      return "LayoutMismatch";
    case ErrorKind::HullViolation:
      return "HullViolation";
    case ErrorKind::Format:
      return "Format";
    case ErrorKind::Io:
      return "Io";
  }
  return "Unknown";
}

}  // namespace partflux
