#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmx {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidMedium,
  kNonPositiveFrequency,
  kGrazingIncidence,
  kPolarizationMismatch,
  kDivergentIntegral,
  kQuadratureFailure,
  kResolutionTooCoarse,
  kEmptyGrid,
  kZeroWaveVector,
  kTailTooLarge,
  kInconsistentSide,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tmx
