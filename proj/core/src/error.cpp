#include "map2fit/error.hpp"

namespace map2fit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::SingularMatrix: return "SingularMatrix";
  case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
  case ErrorCode::ReducibleChain: return "ReducibleChain";
  case ErrorCode::InvalidModel: return "InvalidModel";
  case ErrorCode::DegenerateVariance: return "DegenerateVariance";
  case ErrorCode::EmptySample: return "EmptySample";
  case ErrorCode::NonpositiveEntry: return "NonpositiveEntry";
  case ErrorCode::NonErgodic: return "NonErgodic";
  case ErrorCode::DegenerateLikelihood: return "DegenerateLikelihood";
  case ErrorCode::NonpositiveScale: return "NonpositiveScale";
  case ErrorCode::ZeroVariance: return "ZeroVariance";
  case ErrorCode::NoFeasibleStart: return "NoFeasibleStart";
  case ErrorCode::OptimizerFailure: return "OptimizerFailure";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidModel:
  case ErrorCode::EmptySample:
  case ErrorCode::NonpositiveEntry:
  case ErrorCode::NonpositiveScale:
    return false;
  default:
    return true;
  }
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

} // namespace map2fit
