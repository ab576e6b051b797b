#pragma once

#include <string>
#include <vector>

#include "cuspwind/spectra.hpp"

namespace cuspwind {

/// 1/(2 - 2s) - 1 for s ∈ (1/2, 1).
double critical_exponent(double s);

/// Empirical comparability constant with its value on the last half of the sample.
struct Comparability {
  std::vector<double> alpha;
  std::vector<double> ratio;
  double Z_full = 1.0;  // max over the sample of max(r, 1/r)
  double Z_half = 1.0;  // same over the last half
  bool stable = true;   // Z_full ≤ 2 Z_half
};

/// Ratios q(α)·α^{1/(2-2b(α))} over the grid tail α ≥ 16.
Comparability q_alpha_check(const std::vector<SpectrumPoint>& grid);

/// Ratios (s - b(α)) / ∫_α^∞ q over tested α with α_max ≥ 4α: trapezoid in
/// log t up to α_max plus a fitted power-law tail. Throws TailDominates when
/// the extrapolated part exceeds half the integral.
struct SbIntegral {
  Comparability table;
  std::vector<double> tail_fraction;
  bool low_confidence = false;  // fewer than 3 points: pure trapezoid
};
SbIntegral sb_integral_check(const std::vector<SpectrumPoint>& grid, double s);

/// Σ_l e^{-lq(α)} l^{1-2b(α)} / α on the grid tail (α ≥ 16).
Comparability dirichlet_alpha_check(const std::vector<SpectrumPoint>& grid);

struct TwoSidedRow {
  double alpha;
  double below;  // (s - b) α^{0.75 x_c}
  double above;  // (s - b) α^{1.25 x_c}
};

struct RateReport {
  double s = 0.0;
  std::vector<SpectrumPoint> grid;
  double fitted_exponent = 0.0;
  double fit_r2 = 0.0;
  double loglinear_r2 = 0.0;     // log(s - b) against α, for contrast
  double critical_exponent = 0.0;
  double relative_error = 0.0;   // |x* - x_c| / x_c
  double leave_last_out_exponent = 0.0;
  bool stable = true;
  std::string instability;
  double q_slope = 0.0;          // fitted slope of log q against log α
  double q_slope_expected = 0.0; // -1/(2 - 2s)
  Comparability q_alpha;
  SbIntegral sb_integral;
  Comparability dirichlet;
  std::vector<TwoSidedRow> two_sided;
  double x_below = 0.0;
  double x_above = 0.0;
  bool below_decreasing = false;
  bool above_increasing = false;
};

inline constexpr double kRateTailStart = 16.0;
inline constexpr std::size_t kRateMinPoints = 8;

/// Least-squares fit of log(s - b(α)) = c - x*·log α on the tail α ≥ 16 plus
/// all comparability checks. With throw_on_unstable, FitUnstable is raised
/// when fewer than 8 tail points exist or dropping the last point moves x*
/// by more than 25%.
RateReport rate_fit(const std::vector<SpectrumPoint>& grid, double s, bool throw_on_unstable = true);

}  // namespace cuspwind
