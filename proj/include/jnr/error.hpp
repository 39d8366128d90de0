#pragma once

#include <stdexcept>
#include <string>

namespace jnr {

enum class ErrorKind {
  NonHermitianInput,
  ConvergenceFailure,
  DimensionMismatch,
  DimensionTooLarge,
  ArityMismatch,
  ZeroAtDirection,
  NotOnVariety,
  UnsupportedDimension,
  SingularForm,
  InsufficientSamples,
  NoFormFound,
  EmptyCloud,
  SingularBoundaryPoint,
  ParseError,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported as a jnr::Error carrying its kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jnr
