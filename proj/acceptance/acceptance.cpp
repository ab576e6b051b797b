// Acceptance runner: one PASS/FAIL line per criterion, with the measured
// quantities and wall time. Exit status is 0 once every criterion has been
// evaluated; the individual verdicts are in the output.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cuspwind/error.hpp"
#include "cuspwind/gauss.hpp"
#include "cuspwind/geometry.hpp"
#include "cuspwind/pressure.hpp"
#include "cuspwind/ratelab.hpp"
#include "cuspwind/schottky.hpp"
#include "cuspwind/special.hpp"
#include "cuspwind/spectra.hpp"

using namespace cuspwind;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail += std::string(v.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) v.require(false, "runtime " + fmt("%.1f", secs) + "s over budget");
  if (!v.pass) ++failures;
  std::printf("%s criterion %d (%s) [%.2fs]: %s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.c_str());
  std::fflush(stdout);
}

// Rotated hyperbolic with arc center c and half-width w; rotated parabolic at angle 0.
GeneratorSet ring_group(int k) {
  const double step = pi / (k + 1), w = 0.3 * step, c = 1.0 / std::tan(0.2 * step);
  std::vector<std::pair<MobiusMap, MobiusMap>> hyp;
  for (int m = 1; m <= k; ++m) {
    const MobiusMap h(1.0 / std::sin(w), std::cos(w) / std::sin(w) * std::polar(1.0, m * step - pi));
    hyp.emplace_back(h, h.inverse());
  }
  const MobiusMap g = MobiusMap::unchecked(cplx(1.0, c), cplx(0.0, -c));
  return validate_generators(hyp, {g, g.inverse()});
}

double zeta_euler_maclaurin(double s, int N = 30) {
  double sum = 0.0;
  for (int n = 1; n < N; ++n) sum += std::pow(n, -s);
  sum += std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
  const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
  double rising = s, fact = 2.0;
  for (int k = 1; k <= 6; ++k) {
    sum += B[k - 1] / fact * rising * std::pow(N, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return sum;
}

// Root in b of Σ_{{1,2}^n}|I_w|^b = Σ_{{1,2}^{n-1}}|I_w|^b.
double continuant_root(int n) {
  auto Z = [](int len, double b) {
    double sum = 0.0;
    DigitWord w;
    w.digits.assign(len, 1);
    for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
      for (int i = 0; i < len; ++i) w.digits[i] = 1 + ((mask >> i) & 1u);
      sum += std::pow(w.cylinder_length(), b);
    }
    return sum;
  };
  double lo = 0.1, hi = 0.9;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Z(n, mid) > Z(n - 1, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool strictly(const std::vector<double>& v, bool increasing) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace

int main() {
  const GeneratorSet G = example_group();
  const TransferEngine E = TransferEngine::schottky(G);
  double s = 0.0;

  run(1, "finite-subshift pressure", 1.0, [&](Verdict& v) {
    for (int k = 1; k <= 3; ++k) {
      const double P = pressure(ring_group(k), {0.0, 0.0, 0.0}, 6, 256, Alphabet::HyperbolicOnly).value;
      const double err = std::abs(P - std::log(2.0 * k - 1.0));
      v.require(err < 1e-6, "k=" + std::to_string(k) + " err=" + fmt("%.1e", err));
    }
  });

  run(2, "Bowen dimension", 300.0, [&](Verdict& v) {
    const DimensionResult d = bowen_dimension(E);
    s = d.s;
    const DimensionResult d2 = bowen_dimension(G, 1e-12, kDefaultWordLength + 2, 2 * kDefaultTruncation);
    v.require(s > 0.5 + 1e-3 && s < 1.0 - 1e-3, "s=" + fmt("%.12f", s));
    v.require(std::abs(d2.s - s) < 5e-4, "|s(n+2,2L)-s|=" + fmt("%.1e", std::abs(d2.s - s)));
  });

  run(3, "spectrum self-consistency", 900.0, [&](Verdict& v) {
    const std::vector<double> alphas{2, 4, 8, 16, 32, 64};
    std::vector<double> b, q, qa_tail, q_tail;
    double rp = 0.0, rq = 0.0;
    for (const GridEntry& e : spectrum_grid(E, alphas)) {
      if (!e.point) throw Error(*e.error, e.message);
      rp = std::max(rp, e.point->residual_p);
      rq = std::max(rq, e.point->residual_dq);
      b.push_back(e.point->b);
      q.push_back(e.point->q);
      if (e.alpha >= 16) {
        q_tail.push_back(e.point->q);
        qa_tail.push_back(e.point->q * e.alpha);
      }
    }
    v.require(rp < 1e-6, "max residual_p=" + fmt("%.1e", rp));
    v.require(rq < 1e-4, "max residual_dq=" + fmt("%.1e", rq));
    v.require(strictly(b, true), "b increasing");
    v.require(b.back() < s, "b<s");
    bool positive = true;
    for (double x : q) positive = positive && x > 0.0;
    v.require(positive, "q>0");
    v.require(strictly(q_tail, false), "q decreasing on tail");
    v.require(strictly(qa_tail, false), "q*alpha decreasing on tail");
  });

  RateReport report;
  run(4, "headline rate", 1800.0, [&](Verdict& v) {
    std::vector<double> alphas;
    for (int i = 0; i < 10; ++i) alphas.push_back(16.0 * std::pow(32.0, i / 9.0));
    std::vector<SpectrumPoint> grid;
    for (const GridEntry& e : spectrum_grid(E, alphas, 1e-9)) {
      if (!e.point) throw Error(*e.error, e.message);
      grid.push_back(*e.point);
    }
    report = rate_fit(grid, s, false);
    v.require(report.relative_error <= 0.2, "x*=" + fmt("%.4f", report.fitted_exponent) + " critical=" +
                                                fmt("%.4f", report.critical_exponent) + " rel=" +
                                                fmt("%.3f", report.relative_error));
    v.require(report.below_decreasing, "decreasing at 0.75*critical");
    v.require(report.above_increasing, "increasing at 1.25*critical");
    v.require(report.stable, "fit stable" + (report.instability.empty() ? "" : " (" + report.instability + ")"));
  });

  run(5, "comparability constants", 60.0, [&](Verdict& v) {
    if (report.grid.empty()) throw Error(ErrorKind::InvalidArgument, "no rate grid");
    for (const auto& [name, c] : {std::pair<const char*, const Comparability&>{"Z", report.q_alpha},
                                  {"B", report.sb_integral.table},
                                  {"C", report.dirichlet}}) {
      v.require(std::isfinite(c.Z_full) && c.stable && !c.ratio.empty(),
                std::string(name) + "=" + fmt("%.3f", c.Z_full) + " (half " + fmt("%.3f", c.Z_half) + ")");
    }
  });

  run(6, "Mellin asymptotics", 10.0, [&](Verdict& v) {
    for (double b : {0.6, 0.75, 0.9}) {
      const double r = comparability_check(b, {1e-6}).rows[0].ratio;
      v.require(std::abs(r - 1.0) < 0.05, "b=" + fmt("%.2f", b) + " ratio=" + fmt("%.5f", r));
    }
    double worst = 0.0;
    for (double q : {2.0, 0.3, 1e-2, 1e-4}) {
      const double exact = 1.0 / std::expm1(q);
      worst = std::max(worst, std::abs(dirichlet_K(0.5, q) - exact) / exact);
    }
    v.require(worst < 1e-12, "b=1/2 geometric rel err=" + fmt("%.1e", worst));
  });

  run(7, "special functions", 1.0, [&](Verdict& v) {
    v.require(std::abs(gamma_fn(1.0) - 1.0) < 1e-10, "Gamma(1)");
    v.require(std::abs(gamma_fn(0.5) - std::sqrt(pi)) < 1e-10, "Gamma(1/2)");
    v.require(std::abs(zeta_fn(2.0) - pi * pi / 6) < 1e-9, "zeta(2)");
    const double err = std::abs(zeta_fn(0.5) - zeta_euler_maclaurin(0.5));
    v.require(err < 1e-8, "zeta(1/2) vs Euler-Maclaurin err=" + fmt("%.1e", err));
  });

  run(8, "Gauss foil", 900.0, [&](Verdict& v) {
    v.require(gauss_dim_restricted(1) == 0.0, "dim E(1)=0");
    const double d2 = gauss_dim_restricted(2), oracle = continuant_root(14);
    v.require(std::abs(d2 - 0.5313) < 1e-3 && std::abs(d2 - oracle) < 1e-3,
              "dim E(2)=" + fmt("%.6f", d2) + " oracle=" + fmt("%.6f", oracle));
    double worst = 0.0;
    for (int n : {20, 30, 40, 50}) {
      const double pred = 1.0 - hensley_two_term(n);
      worst = std::max(worst, std::abs(1.0 - gauss_dim_restricted(n) - pred) / pred);
    }
    v.require(worst < 0.15, "Hensley max rel err=" + fmt("%.3f", worst));
    const GaussRateReport r = gauss_rate_check({4, 5, 6, 7, 8, 9, 10, 11, 12});
    v.require(r.base <= 0.6, "base=" + fmt("%.3f", r.base));
    v.require(r.loglinear_r2 > r.powerlaw_r2 && 1.0 - r.powerlaw_r2 > 5.0 * (1.0 - r.loglinear_r2),
              "R2 exp=" + fmt("%.5f", r.loglinear_r2) + " power=" + fmt("%.5f", r.powerlaw_r2));
  });

  run(9, "property suites", 600.0, [&](Verdict& v) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi), rad(0.05, 2.0), disc(0.0, 0.95);
    auto rmap = [&] {
      const double r = rad(rng);
      return MobiusMap(std::cosh(r) * std::polar(1.0, ang(rng)), std::sinh(r) * std::polar(1.0, ang(rng)));
    };
    int geo_bad = 0;
    for (int i = 0; i < 100; ++i) {
      const MobiusMap g = rmap(), h = rmap();
      const cplx z = std::polar(disc(rng), ang(rng));
      if (std::abs(cuspwind::apply(g * h, z) - cuspwind::apply(g, cuspwind::apply(h, z))) > 1e-10) ++geo_bad;
      const Arc A = isometry_arc(g);
      if (std::abs(deriv_mod(g, boundary_point(A.start())) - 1.0) > 1e-9) ++geo_bad;
      if (std::abs(deriv_mod(g, boundary_point(A.end())) - 1.0) > 1e-9) ++geo_bad;
      if (!(deriv_mod(g, boundary_point(A.center)) > 1.0)) ++geo_bad;
    }
    v.require(geo_bad == 0, "geometry failures=" + std::to_string(geo_bad) + "/100");

    int code_bad = 0;
    std::uniform_int_distribution<int> letter(0, 1), coin(0, 1);
    std::uniform_int_distribution<std::int64_t> power(1, 30);
    for (int i = 0; i < 100; ++i) {
      Word w;
      while (w.size() < 3) {
        const Symbol sym = coin(rng) ? Symbol::hyp(letter(rng)) : Symbol::par(coin(rng) ? 1 : -1, power(rng), letter(rng));
        if (w.empty() || admissible(w.back(), sym)) w.push_back(sym);
      }
      if (encode(G, cylinder_arc(G, w).center, 3) != w) ++code_bad;
    }
    v.require(code_bad == 0, "coding failures=" + std::to_string(code_bad) + "/100");

    double gibbs = 0.0;
    for (const PotentialParams p : {PotentialParams{5.0, 0.1, 0.7}, PotentialParams{2.0, 0.01, 0.6},
                                    PotentialParams{0.0, 0.0, 0.69}}) {
      gibbs = std::max(gibbs, gibbs_bracket_check(G, p));
    }
    v.require(std::isfinite(gibbs), "Gibbs max ratio=" + fmt("%.3f", gibbs));

    int grid_bad = 0;
    std::vector<double> pb;
    for (int i = 0; i <= 10; ++i) pb.push_back(E.pressure({5.0, 0.05, 0.1 + 0.1 * i}).value);
    for (std::size_t i = 1; i < pb.size(); ++i) grid_bad += !(pb[i] < pb[i - 1]);
    for (std::size_t i = 1; i + 1 < pb.size(); ++i) grid_bad += pb[i - 1] - 2 * pb[i] + pb[i + 1] < -1e-10;
    std::vector<double> pq;
    for (int i = 0; i <= 10; ++i) pq.push_back(E.pressure({5.0, 1e-4 * (1 + i), 0.6}).value);
    for (std::size_t i = 1; i + 1 < pq.size(); ++i) grid_bad += pq[i - 1] - 2 * pq[i] + pq[i + 1] < -1e-10;
    v.require(grid_bad == 0, "convexity/monotonicity violations=" + std::to_string(grid_bad));
  });

  std::printf("acceptance: 9 criteria evaluated, %d failed\n", failures);
  return 0;
}
