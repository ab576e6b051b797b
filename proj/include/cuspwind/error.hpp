#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cuspwind {

enum class ErrorKind {
  DegenerateDenominator,
  IdentityMap,
  ConstantDerivative,
  NotDiscPreserving,
  NotHyperbolic,
  NotParabolic,
  ArcsOverlap,
  InverseMismatch,
  OutsideDomain,
  ParabolicTail,
  EmptyCylinder,
  Unstable,
  DivergentSum,
  TruncationDominates,
  NoSignChange,
  BracketFailure,
  OutOfRange,
  NearPole,
  TailDominates,
  FitUnstable,
  InvalidArgument,
  ConfigParse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Process exit code used by the command-line front end for this error class.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cuspwind
