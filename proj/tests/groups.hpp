#pragma once
// Test-only group builders and random generators.

#include <cmath>
#include <numbers>
#include <random>

#include "cuspwind/geometry.hpp"
#include "cuspwind/schottky.hpp"

namespace cwtest {

using cuspwind::cplx;
using cuspwind::MobiusMap;

// Hyperbolic whose isometry arc is centered at `center` with half-width w;
// its inverse's arc sits at the antipode.
inline MobiusMap rotated_hyperbolic(double center, double w) {
  const double a = 1.0 / std::sin(w);
  const double b = std::cos(w) / std::sin(w);
  return MobiusMap(a, b * std::polar(1.0, center - std::numbers::pi));
}

// [[1+ic, -ic], [ic, 1-ic]] conjugated by the rotation z -> e^{i phi} z;
// fixed point at angle phi, arcs of half-width atan(1/c) on either side.
inline MobiusMap rotated_parabolic(double phi, double c) {
  return MobiusMap::unchecked(cplx(1.0, c), cplx(0.0, -c) * std::polar(1.0, phi));
}

// k hyperbolic pairs on equally spaced antipodal slots plus a parabolic pair
// at angle 0.
inline cuspwind::GeneratorSet ring_group(int k) {
  const double step = std::numbers::pi / (k + 1);
  const double w = 0.3 * step;
  const double c = 1.0 / std::tan(0.2 * step);
  std::vector<std::pair<MobiusMap, MobiusMap>> hyp;
  for (int m = 1; m <= k; ++m) {
    const MobiusMap h = rotated_hyperbolic(m * step, w);
    hyp.emplace_back(h, h.inverse());
  }
  const MobiusMap g = rotated_parabolic(0.0, c);
  return cuspwind::validate_generators(hyp, {g, g.inverse()});
}

inline MobiusMap random_map(std::mt19937_64& rng, double max_r = 2.0) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), rad(0.05, max_r);
  const double r = rad(rng);
  return MobiusMap(std::cosh(r) * std::polar(1.0, ang(rng)), std::sinh(r) * std::polar(1.0, ang(rng)));
}

inline cplx random_disc_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), rad(0.0, 0.95);
  return std::polar(rad(rng), ang(rng));
}

}  // namespace cwtest
