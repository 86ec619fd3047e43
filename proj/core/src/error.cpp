#include "effheis/error.hpp"

namespace effheis {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NotTildeAntisymmetric: return "NotTildeAntisymmetric";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotTildeSymmetric: return "NotTildeSymmetric";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::TooManyModes: return "TooManyModes";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace effheis
