#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cuspwind/geometry.hpp"

namespace cuspwind {

/// Letters are integers: 2i and 2i+1 are h_i and h_i⁻¹ (i < n); 2n and
/// 2n+1 are the parabolic γ and γ⁻¹. The inverse of a letter is letter ^ 1.
inline int inverse_letter(int letter) noexcept { return letter ^ 1; }

/// A validated generalized Schottky group with one parabolic pair.
class GeneratorSet {
 public:
  /// Number of hyperbolic pairs.
  int n_hyperbolic() const noexcept { return n_hyp_; }
  int num_letters() const noexcept { return 2 * n_hyp_ + 2; }
  int num_hyperbolic_letters() const noexcept { return 2 * n_hyp_; }

  bool is_parabolic(int letter) const noexcept { return letter >= 2 * n_hyp_; }
  /// Parabolic letter for sign +1 (γ) or -1 (γ⁻¹).
  int parabolic_letter(int sign) const noexcept { return 2 * n_hyp_ + (sign > 0 ? 0 : 1); }
  int parabolic_sign(int letter) const noexcept { return letter == 2 * n_hyp_ ? 1 : -1; }

  const MobiusMap& map(int letter) const { return maps_.at(static_cast<std::size_t>(letter)); }
  const Arc& arc(int letter) const { return arcs_.at(static_cast<std::size_t>(letter)); }
  /// Smallest arc outside Δ(letter⁻¹) containing every Δ(e), e ≠ letter⁻¹:
  /// the image region reachable after applying `letter`.
  const Arc& hull(int letter) const { return hulls_.at(static_cast<std::size_t>(letter)); }

  /// γ^l for real l ≥ 0 (sign selects γ or γ⁻¹), via M^l = I + l(M - I).
  MobiusMap parabolic_power(int sign, double l) const;

  double parabolic_fixed_angle() const noexcept { return p_angle_; }
  /// Minimal angular gap between arcs of distinct generator pairs.
  double gap() const noexcept { return gap_; }
  /// Expansion bounds Z ≤ |f̃'| ≤ W over the hyperbolic single-symbol cylinders.
  double Z() const noexcept { return Z_; }
  double W() const noexcept { return W_; }

  std::string letter_name(int letter) const;
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Sub-group generated by the hyperbolic pairs only (no parabolic letters
  /// are used by callers that pick the hyperbolic-only alphabet).
  std::vector<std::pair<MobiusMap, MobiusMap>> hyperbolic_pairs() const;
  std::pair<MobiusMap, MobiusMap> parabolic_pair() const;

 private:
  friend GeneratorSet validate_generators(const std::vector<std::pair<MobiusMap, MobiusMap>>&,
                                          const std::pair<MobiusMap, MobiusMap>&);
  int n_hyp_ = 0;
  std::vector<MobiusMap> maps_;
  std::vector<Arc> arcs_;
  std::vector<Arc> hulls_;
  double p_angle_ = 0.0;
  double gap_ = 0.0;
  double Z_ = 1.0;
  double W_ = 1.0;
  std::string label_;
};

GeneratorSet validate_generators(const std::vector<std::pair<MobiusMap, MobiusMap>>& hyperbolic,
                                 const std::pair<MobiusMap, MobiusMap>& parabolic);

/// Half-plane construction conjugated to the disc by w ↦ (w - i)/(w + i):
/// a hyperbolic with fixed points ±u and multiplier lambda, and w ↦ w + t.
GeneratorSet example_group(double u = 1.0, double t = 6.0, double lambda = 9.0);

/// Induced-alphabet letter: Hyp(h) or Par(sign, l, h) = h ∘ γ_sign^l.
struct Symbol {
  enum class Kind { Hyp, Par };
  Kind kind = Kind::Hyp;
  int letter = 0;        // terminal hyperbolic letter
  int sign = 1;          // parabolic direction (Par only)
  std::int64_t power = 0;  // l ≥ 1 (Par only)

  static Symbol hyp(int letter) { return {Kind::Hyp, letter, 1, 0}; }
  static Symbol par(int sign, std::int64_t l, int letter) { return {Kind::Par, letter, sign > 0 ? 1 : -1, l}; }

  std::int64_t a1() const noexcept { return kind == Kind::Par ? power - 1 : 0; }
  std::int64_t tau() const noexcept { return kind == Kind::Par ? power + 1 : 1; }
  int first_letter(const GeneratorSet& G) const noexcept {
    return kind == Kind::Par ? G.parabolic_letter(sign) : letter;
  }
  int last_letter() const noexcept { return letter; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using Word = std::vector<Symbol>;

std::string to_string(const GeneratorSet& G, const Symbol& s);
std::string to_string(const GeneratorSet& G, const Word& w);

/// Composed group element acting as the induced map on the symbol's cylinder.
MobiusMap element(const GeneratorSet& G, const Symbol& s);
MobiusMap element(const GeneratorSet& G, const Word& w);

std::int64_t a1_sum(const Word& w) noexcept;

/// True iff the first letter of b is not the inverse of the last letter of a.
bool admissible(const Symbol& a, const Symbol& b) noexcept;
bool admissible(const Word& w) noexcept;

struct SeriesStep {
  int letter;
  double angle;
};

/// One step of the Bowen–Series map. The tie at the parabolic fixed point
/// goes to γ.
SeriesStep bowen_series_step(const GeneratorSet& G, double theta);

inline constexpr std::int64_t kParabolicRunCap = 1'000'000;

/// First `depth` induced symbols of the orbit of theta.
Word encode(const GeneratorSet& G, double theta, int depth);

Arc cylinder_arc(const GeneratorSet& G, const Word& w);

struct CylinderBounds {
  double log_deriv_inf;
  double log_deriv_sup;
  std::int64_t a1_sum;
};

/// Exact range of the Birkhoff sum of log|f̃'| over the cylinder.
CylinderBounds cylinder_bounds(const GeneratorSet& G, const Word& w);

struct DistortionEstimate {
  double K;       // K̂(L)
  double K_half;  // K̂(L/2)
  int L;
};

/// Smallest K̂ with l²/K̂² ≤ |(γ^l)'| ≤ K̂² l² on every [Par(·, l, h)], l ≤ L.
DistortionEstimate distortion_estimate(const GeneratorSet& G, int L);

}  // namespace cuspwind
