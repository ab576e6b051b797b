#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspwind/error.hpp"
#include "cuspwind/schottky.hpp"
#include "groups.hpp"

using namespace cuspwind;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

Symbol random_symbol(const GeneratorSet& G, std::mt19937_64& rng, int max_power) {
  std::uniform_int_distribution<int> letter(0, G.num_hyperbolic_letters() - 1), coin(0, 1);
  std::uniform_int_distribution<std::int64_t> power(1, max_power);
  if (coin(rng)) return Symbol::hyp(letter(rng));
  return Symbol::par(coin(rng) ? 1 : -1, power(rng), letter(rng));
}

Word random_word(const GeneratorSet& G, std::mt19937_64& rng, int len, int max_power) {
  Word w;
  while (static_cast<int>(w.size()) < len) {
    const Symbol s = random_symbol(G, rng, max_power);
    if (w.empty() || admissible(w.back(), s)) w.push_back(s);
  }
  return w;
}

}  // namespace

TEST_CASE("builtin example group geometry") {
  const GeneratorSet G = example_group();
  CHECK(G.n_hyperbolic() == 1);
  CHECK(G.num_letters() == 4);
  CHECK(G.arc(0).center == doctest::Approx(3 * pi / 2).epsilon(1e-3));
  CHECK(G.arc(1).center == doctest::Approx(pi / 2).epsilon(1e-3));
  CHECK(G.arc(0).halfwidth == doctest::Approx(0.6435).epsilon(1e-4));
  CHECK(G.parabolic_fixed_angle() == doctest::Approx(0.0));
  // Parabolic arcs touch at the cusp.
  CHECK(std::abs(angle_delta(G.arc(2).start(), G.arc(3).end())) < 1e-9);
  CHECK(G.gap() > 0.0);
  CHECK(G.Z() > 1.0);
  CHECK(G.W() >= G.Z());
  CHECK(G.letter_name(0) == "h1");
  CHECK(G.letter_name(1) == "h1^-1");
  CHECK(G.letter_name(2) == "g");
  CHECK(G.letter_name(3) == "g^-1");
}

TEST_CASE("validation rejects bad generator sets") {
  CHECK(kind_of([] { example_group(1.0, 0.01, 9.0); }) == ErrorKind::ArcsOverlap);
  CHECK(kind_of([] { example_group(1.0, 6.0, 1.0); }) == ErrorKind::NotHyperbolic);
  const GeneratorSet G = example_group();
  auto [h, hi] = G.hyperbolic_pairs().front();
  auto par = G.parabolic_pair();
  CHECK(kind_of([&] { validate_generators({{h, h}}, par); }) == ErrorKind::InverseMismatch);
  CHECK(kind_of([&] { validate_generators({{h, hi}}, {h, hi}); }) == ErrorKind::NotParabolic);
  // Round trip through the pair accessors reproduces the group.
  const GeneratorSet H = validate_generators({{h, hi}}, par);
  CHECK(H.arc(2).center == doctest::Approx(G.arc(2).center));
}

TEST_CASE("ring groups with k hyperbolic pairs validate") {
  for (int k = 1; k <= 3; ++k) {
    const GeneratorSet G = cwtest::ring_group(k);
    CHECK(G.n_hyperbolic() == k);
    CHECK(G.gap() > 0.0);
  }
}

TEST_CASE("symbols: admissibility, a1, names") {
  const GeneratorSet G = example_group();
  const Symbol a = Symbol::hyp(0), b = Symbol::hyp(1), p = Symbol::par(1, 3, 0);
  CHECK_FALSE(admissible(a, b));
  CHECK(admissible(a, a));
  CHECK(admissible(b, p));
  CHECK(admissible(p, a));
  CHECK_FALSE(admissible(p, b));
  CHECK(p.a1() == 2);
  CHECK(p.tau() == 4);
  CHECK(a1_sum({a, p, Symbol::par(-1, 1, 1)}) == 2);
  CHECK(to_string(G, p) == "Par(+,3,h1)");
  CHECK(to_string(G, Word{a, a}) == "Hyp(h1) Hyp(h1)");
}

TEST_CASE("parabolic powers are exact for integer and huge l") {
  const GeneratorSet G = example_group();
  MobiusMap g3 = G.map(2) * G.map(2) * G.map(2);
  const MobiusMap p3 = G.parabolic_power(1, 3.0);
  CHECK(std::abs(g3.a() - p3.a()) < 1e-12);
  CHECK(std::abs(g3.b() - p3.b()) < 1e-12);
  const MobiusMap big = G.parabolic_power(-1, 1e12);
  // |a|² - |b|² cancels in floating point here; check the exact form instead.
  CHECK(big.a().real() == doctest::Approx(1.0));
  CHECK(std::abs(big.b()) == doctest::Approx(std::abs(big.a().imag())).epsilon(1e-12));
  CHECK(std::abs(big.a().imag()) > 1e11);
}

TEST_CASE("encode: fixed points of h1 and the cusp") {
  const GeneratorSet G = example_group();
  double theta = 0.0;
  for (cplx p : fixed_points(G.map(0))) {
    if (G.arc(0).contains(std::arg(p))) theta = wrap_angle(std::arg(p));
  }
  const Word w = encode(G, theta, 8);
  REQUIRE(w.size() == 8);
  for (const Symbol& s : w) CHECK(s == Symbol::hyp(0));
  CHECK(a1_sum(w) == 0);
  CHECK(kind_of([&] { encode(G, G.parabolic_fixed_angle(), 3); }) == ErrorKind::ParabolicTail);
  CHECK(kind_of([&] { bowen_series_step(G, 2.5); }) == ErrorKind::OutsideDomain);
}

TEST_CASE("coding consistency on random cylinder midpoints") {
  std::mt19937_64 rng(21);
  for (int k = 1; k <= 2; ++k) {
    const GeneratorSet G = k == 1 ? example_group() : cwtest::ring_group(2);
    for (int i = 0; i < 50; ++i) {
      const Word w = random_word(G, rng, 3, 20);
      const Arc C = cylinder_arc(G, w);
      const Word back = encode(G, C.center, 3);
      CHECK_MESSAGE(back == w, to_string(G, w), " -> ", to_string(G, back));
      // The induced map on the cylinder is the composed element.
      const CylinderBounds cb = cylinder_bounds(G, w);
      const double v = std::log(deriv_mod(element(G, w), boundary_point(C.center)));
      CHECK(v >= cb.log_deriv_inf - 1e-12);
      CHECK(v <= cb.log_deriv_sup + 1e-12);
      CHECK(cb.a1_sum == a1_sum(w));
      // Sub-cylinders nest.
      CHECK(cylinder_arc(G, Word(w.begin(), w.begin() + 1)).contains(C, 1e-12));
    }
  }
}

TEST_CASE("inadmissible words have empty cylinders") {
  const GeneratorSet G = example_group();
  CHECK(kind_of([&] { cylinder_arc(G, Word{Symbol::hyp(0), Symbol::hyp(1)}); }) == ErrorKind::EmptyCylinder);
  CHECK(kind_of([&] { cylinder_arc(G, Word{}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("induced map is uniformly expanding on single-symbol cylinders") {
  const GeneratorSet G = example_group();
  for (int h = 0; h < 2; ++h) {
    for (std::int64_t l : {1, 2, 5, 50, 1000}) {
      for (int sign : {1, -1}) {
        const CylinderBounds cb = cylinder_bounds(G, Word{Symbol::par(sign, l, h)});
        CHECK(cb.log_deriv_inf > 0.0);
      }
    }
  }
}

TEST_CASE("distortion constant is finite and stable in L") {
  const GeneratorSet G = example_group();
  const DistortionEstimate d = distortion_estimate(G, 200);
  CHECK(d.K >= 1.0);
  CHECK(d.K <= 1.05 * d.K_half);
  CHECK(d.K < 20.0);
  CHECK(kind_of([&] { distortion_estimate(G, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("tie at the cusp resolves to the parabolic generator") {
  const GeneratorSet G = example_group();
  const SeriesStep st = bowen_series_step(G, G.parabolic_fixed_angle());
  CHECK(st.letter == G.parabolic_letter(1));
  CHECK(std::abs(angle_delta(st.angle, G.parabolic_fixed_angle())) < 1e-12);
  CHECK(deriv_mod(G.map(2), boundary_point(G.parabolic_fixed_angle())) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parabolic cylinders nest toward the cusp") {
  const GeneratorSet G = example_group();
  const Arc c2 = cylinder_arc(G, Word{Symbol::par(1, 2, 0)});
  CHECK(encode(G, c2.center, 1) == Word{Symbol::par(1, 2, 0)});
  double prev_dist = 1e300;
  for (std::int64_t l = 1; l <= 50; ++l) {
    const Arc c = cylinder_arc(G, Word{Symbol::par(1, l, 0)});
    CHECK(G.arc(2).contains(c, 1e-12));
    const double dist = std::abs(angle_delta(G.parabolic_fixed_angle(), c.center));
    CHECK(dist < prev_dist);
    prev_dist = dist;
  }
  CHECK(prev_dist < 0.01);
}

TEST_CASE("equal-length cylinders are disjoint") {
  const GeneratorSet G = example_group();
  std::mt19937_64 rng(22);
  std::vector<std::pair<Word, Arc>> cyl;
  for (int i = 0; i < 40; ++i) {
    const Word w = random_word(G, rng, 2, 6);
    bool seen = false;
    for (const auto& [u, a] : cyl) seen = seen || u == w;
    if (!seen) cyl.emplace_back(w, cylinder_arc(G, w));
  }
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    for (std::size_t j = i + 1; j < cyl.size(); ++j) CHECK(arc_gap(cyl[i].second, cyl[j].second) >= -1e-12);
  }
}

TEST_CASE("cylinder derivative bounds follow the expansion and distortion constants") {
  const GeneratorSet G = example_group();
  for (int h = 0; h < 2; ++h) {
    const CylinderBounds cb = cylinder_bounds(G, Word{Symbol::hyp(h)});
    CHECK(cb.log_deriv_inf >= std::log(G.Z()) - 1e-12);
    CHECK(cb.log_deriv_sup <= std::log(G.W()) + 1e-12);
  }
  const DistortionEstimate d = distortion_estimate(G, 1000);
  CHECK(d.K_half / d.K >= 0.95);
  // Par bounds grow like 2 log l with an O(1) window.
  double cmin = 1e300, cmax = -1e300;
  for (std::int64_t l : {2, 10, 100, 1000, 100000}) {
    const CylinderBounds cb = cylinder_bounds(G, Word{Symbol::par(1, l, 0)});
    cmin = std::min(cmin, cb.log_deriv_inf - 2 * std::log(static_cast<double>(l)));
    cmax = std::max(cmax, cb.log_deriv_sup - 2 * std::log(static_cast<double>(l)));
  }
  CHECK(cmax - cmin <= 4 * std::log(d.K) + 2 * std::log(G.W()));
  // Cocycle additivity on a length-2 word.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Word ab = random_word(G, rng, 2, 5);
    const CylinderBounds cab = cylinder_bounds(G, ab);
    const CylinderBounds ca = cylinder_bounds(G, Word{ab[0]}), cb = cylinder_bounds(G, Word{ab[1]});
    CHECK(cab.log_deriv_inf >= ca.log_deriv_inf + cb.log_deriv_inf - 1e-12);
    CHECK(cab.log_deriv_sup <= ca.log_deriv_sup + cb.log_deriv_sup + 1e-12);
  }
}
