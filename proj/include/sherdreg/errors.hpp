#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sherdreg {

enum class ErrorCode {
  PreconditionViolation,
  DegenerateCloud,
  AlphaTooSmall,
  AlphaDegenerate,
  InvalidPolygon,
  LengthMismatch,
  SizeMismatch,
  DegenerateCorrespondence,
  NoViews,
  TooFewNeighbors,
  InsufficientCorrespondences,
  NonFiniteObjective,
  InvalidSpec,
  DistinctnessFailure,
  EmptyCloud,
  IoError,
  FormatError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the pipeline, the Python bindings) can dispatch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::PreconditionViolation, what);
}

}  // namespace sherdreg
