#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace cuspwind {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2π).
double wrap_angle(double theta) noexcept;

/// Signed angular difference to - from, reduced to (-π, π].
double angle_delta(double from, double to) noexcept;

inline cplx boundary_point(double theta) { return std::polar(1.0, theta); }

/// Disc automorphism z ↦ (az + b)/(conj(b) z + conj(a)) with |a|² - |b|² = 1.
///
/// Every construction path renormalizes to unit determinant, so formulas
/// such as deriv_mod() hold without a determinant factor.
class MobiusMap {
 public:
  MobiusMap() = default;

  /// Renormalizes (a, b) to unit determinant. Throws NotDiscPreserving when
  /// |a|² - |b|² is not positive.
  MobiusMap(cplx a, cplx b);

  /// Accepts a general 2×2 matrix representing a disc-preserving map, i.e.
  /// a scalar multiple of [[a, b], [conj(b), conj(a)]].
  static MobiusMap from_matrix(cplx m00, cplx m01, cplx m10, cplx m11, double tol = 1e-10);

  static MobiusMap identity() { return {}; }

  /// Skips renormalization; the caller guarantees |a|² - |b|² = 1 exactly
  /// in exact arithmetic (used for closed-form parabolic powers).
  static MobiusMap unchecked(cplx a, cplx b) { return MobiusMap(a, b, Raw{}); }

  cplx a() const noexcept { return a_; }
  cplx b() const noexcept { return b_; }
  double trace() const noexcept { return 2.0 * a_.real(); }

  MobiusMap inverse() const noexcept;
  bool is_identity(double tol = 1e-10) const noexcept;

  friend MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs);

 private:
  struct Raw {};
  MobiusMap(cplx a, cplx b, Raw) : a_(a), b_(b) {}

  cplx a_{1.0, 0.0};
  cplx b_{0.0, 0.0};
};

enum class MapClass { Hyperbolic, Parabolic, Elliptic };

const char* to_string(MapClass c) noexcept;

cplx apply(const MobiusMap& g, cplx z);

/// Euclidean derivative modulus |g'(z)| = 1/|conj(b) z + conj(a)|².
double deriv_mod(const MobiusMap& g, cplx z);

MapClass classify(const MobiusMap& g);

/// Fixed points on the unit circle (two for hyperbolic, one for parabolic,
/// none for elliptic).
std::vector<cplx> fixed_points(const MobiusMap& g);

/// Closed arc of the unit circle stored as center angle and half-width.
struct Arc {
  double center = 0.0;     // [0, 2π)
  double halfwidth = 0.0;  // (0, π)

  Arc() = default;
  Arc(double center_angle, double half_width);

  double start() const noexcept { return center - halfwidth; }
  double end() const noexcept { return center + halfwidth; }
  double length() const noexcept { return 2.0 * halfwidth; }

  /// Position of theta in the arc's chart: -1 at start(), +1 at end().
  double local(double theta) const noexcept;
  double from_local(double t) const noexcept { return wrap_angle(center + t * halfwidth); }

  bool contains(double theta, double tol = 0.0) const noexcept;
  bool contains(const Arc& other, double tol = 0.0) const noexcept;
};

/// Intersection of two arcs when it is a single arc of positive length.
std::optional<Arc> intersect(const Arc& lhs, const Arc& rhs);

/// Angular distance between two disjoint arcs (negative when they overlap).
double arc_gap(const Arc& lhs, const Arc& rhs) noexcept;

/// Δ(g) = {z ∈ ∂𝔻 : |g'(z)| ≥ 1}. Throws ConstantDerivative for rotations.
Arc isometry_arc(const MobiusMap& g);

/// g⁻¹(arc).
Arc pullback_arc(const MobiusMap& g, const Arc& arc);

/// Infimum and supremum of log|g'| over an arc. |g'| restricted to the
/// circle has exactly one maximum and one minimum, so the extremes are
/// found among the endpoints and whichever critical angle lies inside.
struct LogDerivRange {
  double inf;
  double sup;
};
LogDerivRange log_deriv_range(const MobiusMap& g, const Arc& arc);

}  // namespace cuspwind
