#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuspwind/error.hpp"
#include "cuspwind/pressure.hpp"

namespace cuspwind {

struct DimensionResult {
  double s;
  double lower;
  double upper;
  int n_used;
  int L_used;
};

/// Root of b ↦ P(-b log|f̃'|). For alphabets with a parabolic tail the search
/// interval is (1/2, 1]; finite alphabets search [0, 1].
DimensionResult bowen_dimension(const TransferEngine& engine, double tol = 1e-12, int n = kDefaultWordLength);
DimensionResult bowen_dimension(const GeneratorSet& G, double tol = 1e-12, int n = kDefaultWordLength,
                                int L = kDefaultTruncation, Alphabet alphabet = Alphabet::Full);

struct SpectrumPoint {
  double alpha = 0.0;
  double q = 0.0;
  double b = 0.0;
  double lyapunov = 0.0;
  double residual_p = 0.0;
  double residual_dq = 0.0;
  int n_used = 0;
  int L_used = 0;
};

/// Solves p(α, q, b) = 0 and ∂p/∂q(α, q, b) = 0: an inner root in b for each
/// q, an outer root in log q.
SpectrumPoint solve_spectrum(const TransferEngine& engine, double alpha, double tol = 1e-6,
                             int n = kDefaultWordLength);
/// Same, raising L (doubling, up to 16L) while the tail correction exceeds 1%.
SpectrumPoint solve_spectrum(const GeneratorSet& G, double alpha, double tol = 1e-6, int n = kDefaultWordLength,
                             int L = kDefaultTruncation);

/// ∫log|f̃'| dμ at a solved point.
double lyapunov(const GeneratorSet& G, const SpectrumPoint& point, int n = kDefaultWordLength,
                int L = kDefaultTruncation);

struct GridEntry {
  double alpha = 0.0;
  std::optional<SpectrumPoint> point;
  std::optional<ErrorKind> error;
  std::string message;
};

/// One solve per α, in parallel (capped by CUSPWIND_THREADS); failures are
/// recorded per entry. Output order follows input order.
std::vector<GridEntry> spectrum_grid(const TransferEngine& engine, const std::vector<double>& alphas,
                                     double tol = 1e-6, int n = kDefaultWordLength);
std::vector<GridEntry> spectrum_grid(const GeneratorSet& G, const std::vector<double>& alphas, double tol = 1e-6,
                                     int n = kDefaultWordLength, int L = kDefaultTruncation);

/// Worker count: CUSPWIND_THREADS if set and positive, else hardware concurrency.
int worker_threads();

}  // namespace cuspwind
