#include <doctest.h>

#include <cmath>
#include <functional>

#include "cuspwind/error.hpp"
#include "cuspwind/pressure.hpp"
#include "cuspwind/schottky.hpp"
#include "groups.hpp"

using namespace cuspwind;

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

// Σ over admissible hyperbolic words of length n of sup and inf of |F_w'|^{-b}.
struct WordSums {
  double sup = 0.0;
  double inf = 0.0;
};

WordSums hyperbolic_word_sums(const GeneratorSet& G, int n, double b) {
  WordSums out;
  Word w;
  std::function<void()> rec = [&] {
    if (static_cast<int>(w.size()) == n) {
      const CylinderBounds cb = cylinder_bounds(G, w);
      out.sup += std::exp(-b * cb.log_deriv_inf);
      out.inf += std::exp(-b * cb.log_deriv_sup);
      return;
    }
    for (int e = 0; e < G.num_hyperbolic_letters(); ++e) {
      const Symbol s = Symbol::hyp(e);
      if (!w.empty() && !admissible(w.back(), s)) continue;
      w.push_back(s);
      rec();
      w.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace

TEST_CASE("zero potential on hyperbolic-only alphabets gives log(2k-1)") {
  for (int k = 1; k <= 3; ++k) {
    const GeneratorSet G = cwtest::ring_group(k);
    const PressureEstimate e = pressure(G, {0.0, 0.0, 0.0}, 6, 256, Alphabet::HyperbolicOnly);
    CHECK(std::abs(e.value - std::log(2.0 * k - 1.0)) < 1e-6);
    CHECK(e.lower <= e.value + 1e-12);
    CHECK(e.upper >= e.value - 1e-12);
  }
}

TEST_CASE("hyperbolic-only pressure sits inside the cylinder word-sum bounds") {
  const GeneratorSet G = cwtest::ring_group(2);
  const TransferEngine E = TransferEngine::schottky(G, Alphabet::HyperbolicOnly);
  for (double b : {0.3, 0.7, 1.2}) {
    const double P = E.pressure({0.0, 0.0, b}).value;
    double prev_upper = 1e300;
    for (int n = 2; n <= 6; ++n) {
      const WordSums ws = hyperbolic_word_sums(G, n, b);
      // Sup-sums are submultiplicative, so each gives an upper bound.
      const double upper = std::log(ws.sup) / n;
      CHECK(P <= upper + 1e-12);
      CHECK(upper <= prev_upper + 1e-12);
      prev_upper = upper;
      // Bounded distortion: sup/inf ratios stay bounded, so the gap closes like 1/n.
      CHECK(P >= std::log(ws.inf) / n - std::log(ws.sup / ws.inf) / n - 1e-12);
    }
    const WordSums w5 = hyperbolic_word_sums(G, 5, b), w6 = hyperbolic_word_sums(G, 6, b);
    CHECK(std::abs(std::log(w6.sup / w5.sup) - P) < 2e-2);
  }
}

TEST_CASE("pressure is converged in the truncation and the word length") {
  const GeneratorSet G = example_group();
  for (const PotentialParams p : {PotentialParams{0.0, 0.0, 0.7}, PotentialParams{4.0, 0.01, 0.6},
                                  PotentialParams{1.0, 0.3, 0.2}}) {
    const double ref = pressure(G, p, 6, 1024).value;
    CHECK(pressure(G, p, 6, 64).value == doctest::Approx(ref).epsilon(1e-9));
    CHECK(pressure(G, p, 6, 256).value == doctest::Approx(ref).epsilon(1e-11));
    const PressureEstimate e = pressure(G, p, 10, 256);
    CHECK(e.lower <= ref + 1e-9);
    CHECK(e.upper >= ref - 1e-9);
    CHECK(e.upper - e.lower < 0.05);
  }
}

TEST_CASE("derivatives match finite differences") {
  const GeneratorSet G = example_group();
  const TransferEngine E = TransferEngine::schottky(G);
  for (const PotentialParams p : {PotentialParams{3.0, 0.02, 0.65}, PotentialParams{50.0, 1e-4, 0.68},
                                  PotentialParams{1.0, 0.2, 0.5}}) {
    const SpectralData sd = E.spectral(p);
    CHECK(sd.pressure == doctest::Approx(E.pressure(p).value).epsilon(1e-12));
    const double hq = 1e-4 * p.q, hb = 1e-5;
    const double fq = (E.pressure({p.alpha, p.q + hq, p.b}).value - E.pressure({p.alpha, p.q - hq, p.b}).value) /
                      (2 * hq);
    const double fb = (E.pressure({p.alpha, p.q, p.b + hb}).value - E.pressure({p.alpha, p.q, p.b - hb}).value) /
                      (2 * hb);
    CHECK(sd.dp_dq == doctest::Approx(fq).epsilon(1e-5));
    CHECK(sd.dp_db == doctest::Approx(fb).epsilon(1e-6));
    CHECK(sd.dp_dq == doctest::Approx(p.alpha - sd.a1_average).epsilon(1e-12));
    CHECK(sd.dp_db == doctest::Approx(-sd.lyapunov).epsilon(1e-12));
    CHECK(equilibrium_average(G, p, Observable::A1) == doctest::Approx(sd.a1_average).epsilon(1e-9));
  }
}

TEST_CASE("convexity and monotonicity grids") {
  const GeneratorSet G = example_group();
  const TransferEngine E = TransferEngine::schottky(G);
  // Decreasing and convex in b at fixed q > 0.
  std::vector<double> pb;
  for (int i = 0; i <= 12; ++i) pb.push_back(E.pressure({5.0, 0.05, 0.1 + 0.1 * i}).value);
  for (std::size_t i = 1; i < pb.size(); ++i) CHECK(pb[i] < pb[i - 1]);
  for (std::size_t i = 1; i + 1 < pb.size(); ++i) CHECK(pb[i - 1] - 2 * pb[i] + pb[i + 1] >= -1e-10);
  // Convex in q on a log grid (second divided differences).
  std::vector<double> qs, pq;
  for (int i = 0; i <= 12; ++i) {
    qs.push_back(1e-4 * std::pow(2.0, i));
    pq.push_back(E.pressure({5.0, qs.back(), 0.6}).value);
  }
  for (std::size_t i = 1; i + 1 < qs.size(); ++i) {
    const double d1 = (pq[i] - pq[i - 1]) / (qs[i] - qs[i - 1]);
    const double d2 = (pq[i + 1] - pq[i]) / (qs[i + 1] - qs[i]);
    CHECK(d2 >= d1 - 1e-9);
  }
  // Increasing in alpha with slope q.
  CHECK(E.pressure({6.0, 0.05, 0.6}).value - E.pressure({5.0, 0.05, 0.6}).value == doctest::Approx(0.05));
}

TEST_CASE("Gibbs bracket stays bounded") {
  const GeneratorSet G = example_group();
  CHECK(gibbs_bracket_check(G, {0.0, 0.0, 0.0}, 6, 256, Alphabet::HyperbolicOnly) < 2.5);
  for (const PotentialParams p : {PotentialParams{5.0, 0.1, 0.7}, PotentialParams{2.0, 0.01, 0.6},
                                  PotentialParams{0.0, 0.0, 0.69}}) {
    const double r = gibbs_bracket_check(G, p);
    CHECK(std::isfinite(r));
    CHECK(r >= 1.0);
    CHECK(r < 10.0);
  }
}

TEST_CASE("errors outside the finiteness region and for tiny truncations") {
  const GeneratorSet G = example_group();
  CHECK(kind_of([&] { pressure(G, {0.0, 0.0, 0.4}); }) == ErrorKind::DivergentSum);
  CHECK(kind_of([&] { pressure(G, {0.0, -0.1, 0.8}); }) == ErrorKind::DivergentSum);
  CHECK(kind_of([&] { pressure(G, {0.0, 0.0, 0.7}, 6, 5); }) == ErrorKind::TruncationDominates);
  CHECK(kind_of([&] { pressure(G, {0.0, 0.0, 0.7}, 1); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { equilibrium_average(G, {1.0, 0.0, 0.7}, Observable::A1); }) == ErrorKind::DivergentSum);
  CHECK(finiteness_region(0.0, 0.51));
  CHECK_FALSE(finiteness_region(0.0, 0.5));
  CHECK(finiteness_region(1e-9, 0.0));
  // Hyperbolic-only alphabets have no tail and accept any b.
  CHECK(std::isfinite(pressure(G, {0.0, 0.0, 0.1}, 6, 256, Alphabet::HyperbolicOnly).value));
}

TEST_CASE("bracket narrows with the word length") {
  const GeneratorSet G = example_group();
  const PressureEstimate e4 = pressure(G, {0.0, 0.0, 0.75}, 4), e8 = pressure(G, {0.0, 0.0, 0.75}, 8);
  CHECK(e4.lower <= e4.upper);
  CHECK(e8.upper - e8.lower < e4.upper - e4.lower);
  CHECK(e8.tail_bound >= 0.0);
}

TEST_CASE("log-derivative average is at least log Z") {
  const GeneratorSet G = example_group();
  CHECK(equilibrium_average(G, {3.0, 0.05, 0.65}, Observable::LogDeriv) >= std::log(G.Z()));
  CHECK(gibbs_bracket_check(G, {0.0, 0.0, 0.0}, 6, 256, Alphabet::HyperbolicOnly) <= 2.0 + 1e-9);
}
