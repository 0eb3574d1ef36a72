#include "pdesel/error.hpp"

namespace pdesel {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::ExactFit: return "ExactFit";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NegativeUncertainty: return "NegativeUncertainty";
    case ErrorCode::UnstableCoefficient: return "UnstableCoefficient";
    case ErrorCode::ZeroIntercept: return "ZeroIntercept";
    case ErrorCode::DegenerateU: return "DegenerateU";
    case ErrorCode::UnstableSimulation: return "UnstableSimulation";
    case ErrorCode::TooFewInteriorPoints: return "TooFewInteriorPoints";
    case ErrorCode::MixedCriteria: return "MixedCriteria";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace pdesel
