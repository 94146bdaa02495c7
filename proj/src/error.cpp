#include "ordscore/error.hpp"

namespace ordscore {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::InvalidKnots: return "InvalidKnots";
    case ErrorCode::DegenerateScores: return "DegenerateScores";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IrlsDidNotConverge: return "IrlsDidNotConverge";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DataError: return "DataError";
  }
  return "Unknown";
}

}  // namespace ordscore
