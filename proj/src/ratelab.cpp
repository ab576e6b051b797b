#include "cuspwind/ratelab.hpp"

#include <algorithm>
#include <cmath>

#include "cuspwind/error.hpp"
#include "cuspwind/fit.hpp"
#include "cuspwind/special.hpp"

namespace cuspwind {

namespace {

std::vector<SpectrumPoint> tail_of(const std::vector<SpectrumPoint>& grid) {
  std::vector<SpectrumPoint> out;
  for (const SpectrumPoint& p : grid) {
    if (p.alpha >= kRateTailStart) out.push_back(p);
  }
  return out;
}

void finish(Comparability& c) {
  auto spread = [](double r) { return std::max(r, 1.0 / r); };
  const std::size_t n = c.ratio.size();
  c.Z_full = c.Z_half = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    c.Z_full = std::max(c.Z_full, spread(c.ratio[i]));
    if (i >= n / 2) c.Z_half = std::max(c.Z_half, spread(c.ratio[i]));
  }
  c.stable = c.Z_full <= 2.0 * c.Z_half;
}

}  // namespace

double critical_exponent(double s) {
  if (!(s > 0.5 && s < 1.0)) throw Error(ErrorKind::OutOfRange, "critical_exponent needs s in (1/2, 1)");
  return 1.0 / (2.0 - 2.0 * s) - 1.0;
}

Comparability q_alpha_check(const std::vector<SpectrumPoint>& grid) {
  Comparability c;
  for (const SpectrumPoint& p : tail_of(grid)) {
    c.alpha.push_back(p.alpha);
    c.ratio.push_back(p.q * std::pow(p.alpha, 1.0 / (2.0 - 2.0 * p.b)));
  }
  finish(c);
  return c;
}

SbIntegral sb_integral_check(const std::vector<SpectrumPoint>& grid, double s) {
  SbIntegral out;
  const std::size_t n = grid.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "integral check needs at least 2 grid points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(grid[i].alpha > grid[i - 1].alpha)) {
      throw Error(ErrorKind::InvalidArgument, "grid must be strictly increasing in alpha");
    }
  }
  const double amax = grid.back().alpha;
  // Power-law tail from the last (up to) 4 points: q ~ c α^{-k}, k > 1.
  double tail = 0.0;
  out.low_confidence = n < 3;
  if (!out.low_confidence) {
    std::vector<double> x, y;
    for (std::size_t i = n - std::min<std::size_t>(4, n); i < n; ++i) {
      x.push_back(std::log(grid[i].alpha));
      y.push_back(std::log(grid[i].q));
    }
    const double k = -linear_fit(x, y).slope;
    if (!(k > 1.0)) throw Error(ErrorKind::TailDominates, "q decays too slowly for an integrable tail");
    tail = grid.back().q * amax / (k - 1.0);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (grid[i].alpha * 4.0 > amax) continue;
    // Trapezoid of q·t in log t.
    double integral = 0.0;
    for (std::size_t j = i; j + 1 < n; ++j) {
      const double h = std::log(grid[j + 1].alpha / grid[j].alpha);
      integral += 0.5 * h * (grid[j].q * grid[j].alpha + grid[j + 1].q * grid[j + 1].alpha);
    }
    const double total = integral + tail;
    const double frac = tail / total;
    if (frac > 0.5) {
      throw Error(ErrorKind::TailDominates, "extrapolated tail is " + std::to_string(frac) + " of the integral");
    }
    out.table.alpha.push_back(grid[i].alpha);
    out.table.ratio.push_back((s - grid[i].b) / total);
    out.tail_fraction.push_back(frac);
  }
  finish(out.table);
  return out;
}

Comparability dirichlet_alpha_check(const std::vector<SpectrumPoint>& grid) {
  Comparability c;
  for (const SpectrumPoint& p : tail_of(grid)) {
    if (!(p.b >= 0.5)) continue;
    c.alpha.push_back(p.alpha);
    c.ratio.push_back(dirichlet_K(p.b, p.q, 1e-10) / p.alpha);
  }
  finish(c);
  return c;
}

RateReport rate_fit(const std::vector<SpectrumPoint>& grid, double s, bool throw_on_unstable) {
  RateReport rep;
  rep.s = s;
  rep.grid = grid;
  rep.critical_exponent = critical_exponent(s);
  rep.q_slope_expected = -1.0 / (2.0 - 2.0 * s);
  const std::vector<SpectrumPoint> tail = tail_of(grid);
  std::vector<double> la, a, ly, lq;
  for (const SpectrumPoint& p : tail) {
    const double gap = s - p.b;
    if (!(gap > 0.0)) throw Error(ErrorKind::InvalidArgument, "s - b(alpha) must be positive on the tail");
    la.push_back(std::log(p.alpha));
    a.push_back(p.alpha);
    ly.push_back(std::log(gap));
    lq.push_back(std::log(p.q));
  }
  auto unstable = [&](const std::string& why) {
    rep.stable = false;
    if (rep.instability.empty()) rep.instability = why;
  };
  if (tail.size() < 2) {
    unstable("fewer than 2 grid points with alpha >= 16");
    if (throw_on_unstable) throw Error(ErrorKind::FitUnstable, rep.instability);
    return rep;
  }
  const LinearFit fit = linear_fit(la, ly);
  rep.fitted_exponent = -fit.slope;
  rep.fit_r2 = fit.r2;
  rep.loglinear_r2 = linear_fit(a, ly).r2;
  rep.relative_error = std::abs(rep.fitted_exponent - rep.critical_exponent) / rep.critical_exponent;
  rep.q_slope = linear_fit(la, lq).slope;
  if (tail.size() < kRateMinPoints) unstable("fewer than 8 grid points with alpha >= 16");
  if (tail.size() >= 3) {
    const std::vector<double> la2(la.begin(), la.end() - 1), ly2(ly.begin(), ly.end() - 1);
    rep.leave_last_out_exponent = -linear_fit(la2, ly2).slope;
    if (std::abs(rep.leave_last_out_exponent - rep.fitted_exponent) > 0.25 * std::abs(rep.fitted_exponent)) {
      unstable("dropping the last point moves the exponent by more than 25%");
    }
  } else {
    rep.leave_last_out_exponent = rep.fitted_exponent;
  }

  rep.x_below = 0.75 * rep.critical_exponent;
  rep.x_above = 1.25 * rep.critical_exponent;
  const std::size_t first = tail.size() > 5 ? tail.size() - 5 : 0;
  rep.below_decreasing = rep.above_increasing = true;
  for (std::size_t i = first; i < tail.size(); ++i) {
    const double gap = s - tail[i].b;
    rep.two_sided.push_back({tail[i].alpha, gap * std::pow(tail[i].alpha, rep.x_below),
                             gap * std::pow(tail[i].alpha, rep.x_above)});
    const std::size_t k = rep.two_sided.size();
    if (k >= 2) {
      if (!(rep.two_sided[k - 1].below < rep.two_sided[k - 2].below)) rep.below_decreasing = false;
      if (!(rep.two_sided[k - 1].above > rep.two_sided[k - 2].above)) rep.above_increasing = false;
    }
  }

  rep.q_alpha = q_alpha_check(grid);
  rep.dirichlet = dirichlet_alpha_check(grid);
  rep.sb_integral = sb_integral_check(tail, s);

  if (!rep.stable && throw_on_unstable) throw Error(ErrorKind::FitUnstable, rep.instability);
  return rep;
}

}  // namespace cuspwind
