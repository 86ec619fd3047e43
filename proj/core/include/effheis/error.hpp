#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace effheis {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  Overflow,
  DimensionOverflow,
  DimensionMismatch,
  NotAntisymmetric,
  NotTildeAntisymmetric,
  NotSymmetric,
  NotTildeSymmetric,
  IndexOutOfRange,
  UnsupportedOrder,
  StepTooLarge,
  GridMismatch,
  DegenerateFit,
  TooManyModes,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as this exception; `kind()` is the
/// stable discriminator, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace effheis
