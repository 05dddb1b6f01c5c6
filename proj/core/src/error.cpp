#include "invedit/error.hpp"

namespace invedit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadIndexRange: return "BadIndexRange";
    case ErrorCode::DegenerateEyes: return "DegenerateEyes";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SingleClassDataset: return "SingleClassDataset";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateResult: return "DegenerateResult";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPSDProduct: return "NonPSDProduct";
    case ErrorCode::ZeroEmbedding: return "ZeroEmbedding";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace invedit
