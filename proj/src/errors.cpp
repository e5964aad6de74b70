#include "frachelm/errors.hpp"

namespace frachelm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::KernelTabulationFailed: return "KernelTabulationFailed";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NotContracting: return "NotContracting";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::PointInsideSupport: return "PointInsideSupport";
    case ErrorKind::UnderResolvedPhase: return "UnderResolvedPhase";
    case ErrorKind::NonUnitDirection: return "NonUnitDirection";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool Error::is_validation() const noexcept {
  switch (kind_) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::NonpositiveRadius:
    case ErrorKind::GridMismatch:
    case ErrorKind::PointInsideSupport:
    case ErrorKind::NonUnitDirection:
    case ErrorKind::IoError:
      return true;
    default:
      return false;
  }
}

}  // namespace frachelm
