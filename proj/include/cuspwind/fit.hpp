#pragma once

#include <vector>

namespace cuspwind {

struct LinearFit {
  double slope;
  double intercept;
  double r2;
};

/// Ordinary least squares y ≈ intercept + slope·x. Needs at least 2 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cuspwind
