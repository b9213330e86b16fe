#include "khdetect/error.hpp"

namespace khdetect {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedSyntax:
      return "MalformedSyntax";
    case ErrorCode::EdgeUsedNotTwice:
      return "EdgeUsedNotTwice";
    case ErrorCode::InconsistentOrientation:
      return "InconsistentOrientation";
    case ErrorCode::GeneratorOutOfRange:
      return "GeneratorOutOfRange";
    case ErrorCode::EdgeNotFound:
      return "EdgeNotFound";
    case ErrorCode::SameComponent:
      return "SameComponent";
    case ErrorCode::IndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::CompositionNotZero:
      return "CompositionNotZero";
    case ErrorCode::ShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::LengthMismatch:
      return "LengthMismatch";
    case ErrorCode::BasepointRequired:
      return "BasepointRequired";
    case ErrorCode::BasepointNotFound:
      return "BasepointNotFound";
    case ErrorCode::TooManyCrossings:
      return "TooManyCrossings";
    case ErrorCode::TorresViolated:
      return "TorresViolated";
    case ErrorCode::NormalizationImpossible:
      return "NormalizationImpossible";
    case ErrorCode::NotExactDivision:
      return "NotExactDivision";
    case ErrorCode::InternalError:
      return "InternalError";
    case ErrorCode::NotPermutation:
      return "NotPermutation";
    case ErrorCode::MarkingCollision:
      return "MarkingCollision";
    case ErrorCode::ComponentLabelMismatch:
      return "ComponentLabelMismatch";
    case ErrorCode::GridTooLarge:
      return "GridTooLarge";
    case ErrorCode::DifferentialNotSquareZero:
      return "DifferentialNotSquareZero";
    case ErrorCode::StabilizationDivisionFailed:
      return "StabilizationDivisionFailed";
    case ErrorCode::DeconvolutionFailed:
      return "DeconvolutionFailed";
    case ErrorCode::OddDim:
      return "OddDim";
    case ErrorCode::AsymmetricDims:
      return "AsymmetricDims";
    case ErrorCode::TopBelowHalfL:
      return "TopBelowHalfL";
    case ErrorCode::DimTooLarge:
      return "DimTooLarge";
    case ErrorCode::InvalidLinking:
      return "InvalidLinking";
    case ErrorCode::UnknownTarget:
      return "UnknownTarget";
    case ErrorCode::NotTwoComponents:
      return "NotTwoComponents";
    case ErrorCode::SchemaViolation:
      return "SchemaViolation";
    case ErrorCode::UnknownInput:
      return "UnknownInput";
  }
  return "Unknown";
}

}  // namespace khdetect
