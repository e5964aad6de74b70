#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frachelm {

enum class ErrorKind {
  NonpositiveRadius,
  QuadratureNotConverged,
  KernelTabulationFailed,
  GridMismatch,
  NotContracting,
  MaxIterExceeded,
  PointInsideSupport,
  UnderResolvedPhase,
  NonUnitDirection,
  CoverageGap,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit status (1 = validation, 2 = numerical).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by bad input rather than numerics.
  bool is_validation() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace frachelm
