#include "torich/error.hpp"

namespace torich {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRankMismatch: return "E_RANK";
    case ErrorCode::kOverflow: return "E_OVERFLOW";
    case ErrorCode::kNotSmooth: return "E_NOT_SMOOTH";
    case ErrorCode::kNotCone: return "E_NOT_CONE";
    case ErrorCode::kFanAxiom: return "E_FAN_AXIOM";
    case ErrorCode::kStar: return "E_STAR";
    case ErrorCode::kBoundary: return "E_BOUNDARY";
    case ErrorCode::kCartier: return "E_CARTIER";
    case ErrorCode::kUnbounded: return "E_UNBOUNDED";
    case ErrorCode::kChart: return "E_CHART";
    case ErrorCode::kSmoothCover: return "E_SMOOTH_COVER";
    case ErrorCode::kNotFace: return "E_NOT_FACE";
    case ErrorCode::kNoStabilize: return "E_NO_STABILIZE";
    case ErrorCode::kEmpty: return "E_EMPTY";
    case ErrorCode::kNotCompatible: return "E_NOT_COMPATIBLE";
    case ErrorCode::kParse: return "E_PARSE";
    case ErrorCode::kField: return "E_FIELD";
    case ErrorCode::kMissingIngredient: return "E_MISSING_INGREDIENT";
    case ErrorCode::kDegree: return "E_DEGREE";
  }
  return "E_UNKNOWN";
}

}  // namespace torich
