#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cuspwind/schottky.hpp"

namespace cuspwind {

inline constexpr int kDefaultWordLength = 6;
inline constexpr int kDefaultTruncation = 256;
inline constexpr int kDefaultNodes = 16;

/// Potential q(α - a₁) - b log|f̃'|.
struct PotentialParams {
  double alpha = 0.0;
  double q = 0.0;
  double b = 0.0;
};

enum class PressureMethod { WordSumRatio, WordSumDirect };
const char* to_string(PressureMethod m) noexcept;

struct PressureEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;  // converged estimate (Perron root of the discretized operator)
  int n = 0;           // word length of the ratio bracket
  int L = 0;           // parabolic powers summed exactly
  double tail_bound = 0.0;  // relative size of the l > L correction term
  double tail_mass = 0.0;   // relative weight carried by l > L
  int iterations = 0;       // power iterations needed to converge `value`
  PressureMethod method = PressureMethod::WordSumRatio;
};

/// (q, b) ∈ (0,∞)×[0,∞) ∪ {0}×(1/2,∞).
bool finiteness_region(double q, double b) noexcept;

enum class Alphabet { Full, HyperbolicOnly };
enum class Observable { A1, LogDeriv };

/// Pressure together with its first derivatives at one parameter point.
struct SpectralData {
  PressureEstimate estimate;
  double pressure;  // = estimate.value
  double dp_dq;     // α - ∫a₁ dμ
  double dp_db;     // -∫log|f̃'| dμ
  double a1_average;
  double lyapunov;
};

/// Chebyshev collocation of the transfer operator of an induced system on
/// a union of intervals. Applying it n times to 1 gives the word sums
/// Σ_{|w|=n} exp(S_n φ ∘ ψ_w) at every node; their consecutive ratios bracket
/// the pressure. Geometry (branch points, log-derivatives, interpolation
/// rows) is cached at construction, so evaluation only re-weights.
class TransferEngine {
 public:
  static TransferEngine schottky(const GeneratorSet& G, Alphabet alphabet = Alphabet::Full,
                                 int L = kDefaultTruncation, int nodes = kDefaultNodes);
  /// Gauss map branches y ↦ 1/(m + y). digit_cap > 0 restricts to m ≤ digit_cap
  /// (finite alphabet, no tail); digit_cap = 0 keeps all digits with exact sums
  /// for m ≤ L and the integrated tail beyond.
  static TransferEngine gauss(int L = kDefaultTruncation, int nodes = kDefaultNodes, int digit_cap = 0);

  TransferEngine(TransferEngine&&) noexcept;
  TransferEngine& operator=(TransferEngine&&) noexcept;
  ~TransferEngine();

  int L() const noexcept;
  int nodes() const noexcept;
  bool has_tail() const noexcept;
  int size() const noexcept;

  /// Ratio bracket at word length n plus the converged value.
  PressureEstimate pressure(const PotentialParams& p, int n = kDefaultWordLength) const;

  /// Pressure and Ruelle derivatives from left/right Perron vectors.
  SpectralData spectral(const PotentialParams& p, int n = kDefaultWordLength) const;

  /// Max over length-2 cylinders (parabolic powers ≤ max_power) of
  /// max(r, 1/r), r = μ([w]) / exp(-2P + S₂φ(midpoint)). Needs a Schottky engine.
  double gibbs_max_ratio(const PotentialParams& p, int n = kDefaultWordLength, int max_power = 20) const;

 private:
  struct Impl;
  explicit TransferEngine(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

PressureEstimate pressure(const GeneratorSet& G, const PotentialParams& p, int n = kDefaultWordLength,
                          int L = kDefaultTruncation, Alphabet alphabet = Alphabet::Full);

double equilibrium_average(const GeneratorSet& G, const PotentialParams& p, Observable observable,
                           int n = kDefaultWordLength, int L = kDefaultTruncation);

double gibbs_bracket_check(const GeneratorSet& G, const PotentialParams& p, int n = kDefaultWordLength,
                           int L = kDefaultTruncation, Alphabet alphabet = Alphabet::Full);

}  // namespace cuspwind
