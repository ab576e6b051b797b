#include "cuspwind/error.hpp"

namespace cuspwind {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::IdentityMap: return "IdentityMap";
    case ErrorKind::ConstantDerivative: return "ConstantDerivative";
    case ErrorKind::NotDiscPreserving: return "NotDiscPreserving";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotParabolic: return "NotParabolic";
    case ErrorKind::ArcsOverlap: return "ArcsOverlap";
    case ErrorKind::InverseMismatch: return "InverseMismatch";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::ParabolicTail: return "ParabolicTail";
    case ErrorKind::EmptyCylinder: return "EmptyCylinder";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::DivergentSum: return "DivergentSum";
    case ErrorKind::TruncationDominates: return "TruncationDominates";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::TailDominates: return "TailDominates";
    case ErrorKind::FitUnstable: return "FitUnstable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigParse:
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::NotDiscPreserving:
    case ErrorKind::NotHyperbolic:
    case ErrorKind::NotParabolic:
    case ErrorKind::ArcsOverlap:
    case ErrorKind::InverseMismatch:
    case ErrorKind::IdentityMap:
    case ErrorKind::ConstantDerivative:
      return 3;
    case ErrorKind::FitUnstable:
      return 5;
    default:
      return 4;
  }
}

}  // namespace cuspwind
