#include "cuspwind/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cuspwind/error.hpp"

namespace cuspwind {

double wrap_angle(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_delta(double from, double to) noexcept {
  double d = std::remainder(to - from, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

MobiusMap::MobiusMap(cplx a, cplx b) {
  const double det = std::norm(a) - std::norm(b);
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorKind::NotDiscPreserving, "|a|^2 - |b|^2 must be positive");
  }
  const double s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
}

MobiusMap MobiusMap::from_matrix(cplx m00, cplx m01, cplx m10, cplx m11, double tol) {
  const cplx det = m00 * m11 - m01 * m10;
  if (std::abs(det) < 1e-300) {
    throw Error(ErrorKind::NotDiscPreserving, "singular matrix");
  }
  const cplx s = std::sqrt(det);
  const cplx a = m00 / s, b = m01 / s, c = m10 / s, d = m11 / s;
  const double scale = std::max(1.0, std::abs(a) + std::abs(b));
  if (std::abs(c - std::conj(b)) > tol * scale || std::abs(d - std::conj(a)) > tol * scale) {
    throw Error(ErrorKind::NotDiscPreserving, "matrix is not of the form [[a, b], [conj(b), conj(a)]]");
  }
  return MobiusMap(a, b);
}

MobiusMap MobiusMap::inverse() const noexcept { return MobiusMap(std::conj(a_), -b_, Raw{}); }

bool MobiusMap::is_identity(double tol) const noexcept {
  return std::abs(b_) <= tol && (std::abs(a_ - 1.0) <= tol || std::abs(a_ + 1.0) <= tol);
}

MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs) {
  // [[a, b], [b̄, ā]] · [[c, d], [d̄, c̄]] keeps the same shape.
  const cplx a = lhs.a_ * rhs.a_ + lhs.b_ * std::conj(rhs.b_);
  const cplx b = lhs.a_ * rhs.b_ + lhs.b_ * std::conj(rhs.a_);
  return MobiusMap(a, b);
}

const char* to_string(MapClass c) noexcept {
  switch (c) {
    case MapClass::Hyperbolic: return "Hyperbolic";
    case MapClass::Parabolic: return "Parabolic";
    case MapClass::Elliptic: return "Elliptic";
  }
  return "?";
}

namespace {

cplx denominator(const MobiusMap& g, cplx z) {
  const cplx den = std::conj(g.b()) * z + std::conj(g.a());
  if (std::abs(den) < 1e-300) {
    throw Error(ErrorKind::DegenerateDenominator, "conj(b) z + conj(a) vanishes");
  }
  return den;
}

}  // namespace

cplx apply(const MobiusMap& g, cplx z) {
  const cplx den = denominator(g, z);
  return (g.a() * z + g.b()) / den;
}

double deriv_mod(const MobiusMap& g, cplx z) { return 1.0 / std::norm(denominator(g, z)); }

MapClass classify(const MobiusMap& g) {
  if (std::abs(g.a() - 1.0) + std::abs(g.b()) <= 1e-10 || std::abs(g.a() + 1.0) + std::abs(g.b()) <= 1e-10) {
    throw Error(ErrorKind::IdentityMap, "identity has no classification");
  }
  const double tr = std::abs(g.trace());
  if (tr > 2.0 + 1e-10) return MapClass::Hyperbolic;
  if (tr >= 2.0 - 1e-10) return MapClass::Parabolic;
  return MapClass::Elliptic;
}

std::vector<cplx> fixed_points(const MobiusMap& g) {
  const MapClass cls = classify(g);
  const cplx A = std::conj(g.b());
  const cplx B = std::conj(g.a()) - g.a();
  const cplx C = -g.b();
  std::vector<cplx> out;
  if (cls == MapClass::Elliptic) return out;
  if (cls == MapClass::Parabolic) {
    cplx z = -B / (2.0 * A);
    out.push_back(z / std::abs(z));
    return out;
  }
  const cplx disc = std::sqrt(B * B - 4.0 * A * C);
  // Numerically stable quadratic roots.
  const cplx qq = -0.5 * (B + (std::real(std::conj(B) * disc) >= 0.0 ? disc : -disc));
  for (cplx z : {qq / A, C / qq}) {
    if (std::abs(std::abs(z) - 1.0) <= 1e-9) out.push_back(z);
  }
  return out;
}

Arc::Arc(double center_angle, double half_width) : center(wrap_angle(center_angle)), halfwidth(half_width) {
  if (!(half_width > 0.0) || !(half_width < std::numbers::pi)) {
    throw Error(ErrorKind::InvalidArgument, "arc half-width must lie in (0, pi), got " + std::to_string(half_width));
  }
}

double Arc::local(double theta) const noexcept { return angle_delta(center, theta) / halfwidth; }

bool Arc::contains(double theta, double tol) const noexcept {
  return std::abs(angle_delta(center, theta)) <= halfwidth + tol;
}

bool Arc::contains(const Arc& other, double tol) const noexcept {
  const double d = angle_delta(center, other.center);
  return d - other.halfwidth >= -halfwidth - tol && d + other.halfwidth <= halfwidth + tol;
}

std::optional<Arc> intersect(const Arc& lhs, const Arc& rhs) {
  const double d = angle_delta(lhs.center, rhs.center);
  const double lo = std::max(-lhs.halfwidth, d - rhs.halfwidth);
  const double hi = std::min(lhs.halfwidth, d + rhs.halfwidth);
  if (!(hi > lo)) return std::nullopt;
  return Arc(lhs.center + 0.5 * (lo + hi), 0.5 * (hi - lo));
}

double arc_gap(const Arc& lhs, const Arc& rhs) noexcept {
  const double d = std::abs(angle_delta(lhs.center, rhs.center));
  return d - lhs.halfwidth - rhs.halfwidth;
}

Arc isometry_arc(const MobiusMap& g) {
  if (std::abs(g.b()) <= 1e-12) {
    throw Error(ErrorKind::ConstantDerivative, "|g'| is constant on the circle when b = 0");
  }
  const cplx centre = -std::conj(g.a()) / std::conj(g.b());
  const double ratio = std::clamp(std::abs(g.b()) / std::abs(g.a()), -1.0, 1.0);
  return Arc(std::arg(centre), std::acos(ratio));
}

Arc pullback_arc(const MobiusMap& g, const Arc& arc) {
  const MobiusMap inv = g.inverse();
  const double s = std::arg(apply(inv, boundary_point(arc.start())));
  const double e = std::arg(apply(inv, boundary_point(arc.end())));
  const double m = std::arg(apply(inv, boundary_point(arc.center)));
  // Orientation-preserving maps send the counter-clockwise arc [s0, e0] to
  // the counter-clockwise arc [s, e].
  double span = wrap_angle(e - s);
  if (span == 0.0) span = kTwoPi;
  Arc out(s + 0.5 * span, 0.5 * span);
  if (!out.contains(m, 1e-9)) {
    throw Error(ErrorKind::DegenerateDenominator, "pullback orientation check failed");
  }
  return out;
}

LogDerivRange log_deriv_range(const MobiusMap& g, const Arc& arc) {
  auto value = [&](double theta) { return std::log(deriv_mod(g, boundary_point(theta))); };
  double lo = std::min(value(arc.start()), value(arc.end()));
  double hi = std::max(value(arc.start()), value(arc.end()));
  if (std::abs(g.b()) > 0.0) {
    // |conj(b) z + conj(a)| is smallest at arg(-conj(a)/conj(b)) and largest opposite.
    const double peak = std::arg(-std::conj(g.a()) / std::conj(g.b()));
    if (arc.contains(peak)) hi = std::max(hi, value(peak));
    if (arc.contains(peak + std::numbers::pi)) lo = std::min(lo, value(peak + std::numbers::pi));
  }
  return {lo, hi};
}

}  // namespace cuspwind
