#include <doctest.h>

#include <cmath>

#include "cuspwind/error.hpp"
#include "cuspwind/ratelab.hpp"

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

// b(α) = s - α^{-c}, q(α) = α^{-k}, log-spaced on [lo, hi].
std::vector<SpectrumPoint> synthetic(double s, double c, double k, double lo = 16, double hi = 512, int count = 10) {
  std::vector<SpectrumPoint> g;
  for (int i = 0; i < count; ++i) {
    const double a = lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(i) / (count - 1));
    SpectrumPoint p;
    p.alpha = a;
    p.b = s - std::pow(a, -c);
    p.q = std::pow(a, -k);
    g.push_back(p);
  }
  return g;
}

}  // namespace

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(0.6) == doctest::Approx(0.25));
  CHECK(critical_exponent(0.9) == doctest::Approx(4.0));
  CHECK(critical_exponent(0.75) == doctest::Approx(1.0));
  CHECK(critical_exponent(0.7) < critical_exponent(0.8));
  CHECK(critical_exponent(1.0 - 1e-9) > 1e8);
  CHECK(kind_of([] { critical_exponent(0.5); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { critical_exponent(1.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("synthetic power law is recovered exactly") {
  for (double c : {0.3, 0.6, 1.1}) {
    const RateReport r = rate_fit(synthetic(0.7, c, 1.7), 0.7);
    CHECK(std::abs(r.fitted_exponent - c) < 1e-3);
    CHECK(r.fit_r2 == doctest::Approx(1.0));
    CHECK(r.stable);
    CHECK(r.q_slope == doctest::Approx(-1.7));
    CHECK(r.q_slope_expected == doctest::Approx(-1.0 / 0.6));
    REQUIRE(r.two_sided.size() == 5);
    // Below/above are monotone exactly when c sits between the two probes.
    const bool inside = c > r.x_below && c < r.x_above;
    CHECK((r.below_decreasing && r.above_increasing) == inside);
  }
}

TEST_CASE("two-sided table brackets the critical exponent") {
  const double s = 0.7;
  const double xc = critical_exponent(s);
  const RateReport r = rate_fit(synthetic(s, xc, 1.0 / (2 - 2 * s)), s);
  CHECK(r.relative_error < 1e-3);
  CHECK(r.below_decreasing);
  CHECK(r.above_increasing);
  CHECK(r.two_sided.back().alpha == doctest::Approx(512.0));
}

TEST_CASE("short grids are unstable") {
  CHECK(kind_of([] { rate_fit(synthetic(0.7, 0.5, 1.7, 16, 64, 4), 0.7); }) == ErrorKind::FitUnstable);
  const RateReport r = rate_fit(synthetic(0.7, 0.5, 1.7, 16, 64, 4), 0.7, false);
  CHECK_FALSE(r.stable);
  CHECK_FALSE(r.instability.empty());
  CHECK(r.fitted_exponent == doctest::Approx(0.5));
}

TEST_CASE("comparability checks") {
  const double s = 0.7, k = 1.0 / (2 - 2 * s);
  const auto g = synthetic(s, k - 1.0, k);
  const Comparability z = q_alpha_check(g);
  CHECK(z.ratio.size() == g.size());
  CHECK(z.Z_full < 20.0);
  CHECK(z.stable);
  const Comparability one = q_alpha_check(synthetic(s, 0.5, 1.7, 32, 32, 1));
  REQUIRE(one.ratio.size() == 1);
  CHECK(one.Z_full == doctest::Approx(std::max(one.ratio[0], 1.0 / one.ratio[0])));

  // For an exact power law the integral is q(α)α/(k-1); the ratio is then constant.
  const SbIntegral sb = sb_integral_check(g, s);
  CHECK_FALSE(sb.low_confidence);
  REQUIRE(sb.table.ratio.size() >= 2);
  for (double fr : sb.tail_fraction) CHECK(fr < 0.5);
  CHECK(sb.table.ratio.front() == doctest::Approx(sb.table.ratio.back()).epsilon(0.05));
  const SbIntegral two = sb_integral_check(synthetic(s, 0.5, 1.7, 16, 512, 2), s);
  CHECK(two.low_confidence);
  CHECK(two.table.ratio.size() == 1);
  CHECK(kind_of([&] { sb_integral_check(synthetic(s, 0.5, 0.8), s); }) == ErrorKind::TailDominates);
  CHECK(kind_of([&] { sb_integral_check(synthetic(s, 0.5, 1.01), s); }) == ErrorKind::TailDominates);

  const Comparability c = dirichlet_alpha_check(g);
  CHECK(c.ratio.size() == g.size());
  for (double r : c.ratio) CHECK(std::isfinite(r));
}
