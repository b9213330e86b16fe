#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace khdetect {

enum class ErrorCode {
  // linkdiag
  MalformedSyntax,
  EdgeUsedNotTwice,
  InconsistentOrientation,
  GeneratorOutOfRange,
  EdgeNotFound,
  SameComponent,
  IndexOutOfRange,
  // exactalg
  CompositionNotZero,
  ShapeMismatch,
  // khovanov
  LengthMismatch,
  BasepointRequired,
  BasepointNotFound,
  TooManyCrossings,
  // laurent
  TorresViolated,
  NormalizationImpossible,
  NotExactDivision,
  InternalError,
  // gridfloer
  NotPermutation,
  MarkingCollision,
  ComponentLabelMismatch,
  GridTooLarge,
  DifferentialNotSquareZero,
  StabilizationDivisionFailed,
  DeconvolutionFailed,
  // detect
  OddDim,
  AsymmetricDims,
  TopBelowHalfL,
  DimTooLarge,
  InvalidLinking,
  UnknownTarget,
  NotTwoComponents,
  // cli / corpus
  SchemaViolation,
  UnknownInput,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace khdetect
