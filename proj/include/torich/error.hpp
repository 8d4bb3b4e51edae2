#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torich {

enum class ErrorCode {
  kRankMismatch,
  kOverflow,
  kNotSmooth,
  kNotCone,
  kFanAxiom,
  kStar,
  kBoundary,
  kCartier,
  kUnbounded,
  kChart,
  kSmoothCover,
  kNotFace,
  kNoStabilize,
  kEmpty,
  kNotCompatible,
  kParse,
  kField,
  kMissingIngredient,
  kDegree,
};

/// Stable identifier used in reports and CLI diagnostics, e.g. "E_FAN_AXIOM".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace torich
