#pragma once

#include <stdexcept>
#include <string>

namespace invedit {

enum class ErrorCode {
  EmptyInput,
  BadIndexRange,
  DegenerateEyes,
  SingularTransform,
  ShapeMismatch,
  BadGrid,
  MissingTarget,
  NonFiniteLoss,
  NonFiniteValue,
  SingleClassDataset,
  ZeroVector,
  DegenerateResult,
  TooFewSamples,
  DimensionMismatch,
  NonPSDProduct,
  ZeroEmbedding,
  TooSmall,
  BadFormat,
  IoFailure,
  Unsupported,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace invedit
