#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cuspwind/pressure.hpp"
#include "cuspwind/spectra.hpp"

namespace cuspwind {

inline constexpr int kGaussNodes = 24;

/// Continued-fraction digit word [m_1, …, m_n].
struct DigitWord {
  std::vector<std::int64_t> digits;

  /// (q_n, q_{n-1}) from q_k = m_k q_{k-1} + q_{k-2}; throws OutOfRange on overflow.
  std::pair<std::uint64_t, std::uint64_t> continuants() const;
  /// Length of the cylinder: 1/(q_n (q_n + q_{n-1})).
  double cylinder_length() const;
  std::int64_t digit_sum() const;
};

/// Pressure of q(α - d₁) - b log|T'| with α = 0 (pass alpha for the shifted form).
PressureEstimate gauss_pressure(double q, double b, int n = kDefaultWordLength, int L = kDefaultTruncation,
                                double alpha = 0.0);

/// dim_H E(nmax): points whose digits never exceed nmax.
double gauss_dim_restricted(int nmax, double tol = 1e-12);

/// Hensley's two-term expansion 1 - 6/(π² n) - 72 log n/(π⁴ n²).
double hensley_two_term(int n);

/// (𝔮(α), 𝔟(α)) for the digit-average spectrum, α > 1.
SpectrumPoint gauss_spectrum(double alpha, double tol = 1e-6, int n = kDefaultWordLength,
                             int L = kDefaultTruncation);

struct GaussRateReport {
  std::vector<SpectrumPoint> points;
  double base;              // e^{slope} of log(1 - 𝔟) against α
  double loglinear_r2;      // R² of log(1 - 𝔟) against α
  double powerlaw_r2;       // R² of log(1 - 𝔟) against log α
  double scaled_max_min;    // max/min of (1 - 𝔟(α)) 2^α
};

GaussRateReport gauss_rate_check(const std::vector<double>& alpha_grid, double tol = 1e-6,
                                 int n = kDefaultWordLength, int L = kDefaultTruncation);

}  // namespace cuspwind
