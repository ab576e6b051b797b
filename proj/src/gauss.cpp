#include "cuspwind/gauss.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "cuspwind/error.hpp"
#include "cuspwind/fit.hpp"

namespace cuspwind {

std::pair<std::uint64_t, std::uint64_t> DigitWord::continuants() const {
  std::uint64_t prev = 0, cur = 1;  // q_{-1}, q_0
  for (std::int64_t m : digits) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "digits must be >= 1");
    std::uint64_t prod = 0, next = 0;
    if (__builtin_mul_overflow(static_cast<std::uint64_t>(m), cur, &prod) ||
        __builtin_add_overflow(prod, prev, &next)) {
      throw Error(ErrorKind::OutOfRange, "continuant overflows 64 bits");
    }
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double DigitWord::cylinder_length() const {
  const auto [qn, qm] = continuants();
  return 1.0 / (static_cast<double>(qn) * (static_cast<double>(qn) + static_cast<double>(qm)));
}

std::int64_t DigitWord::digit_sum() const {
  std::int64_t s = 0;
  for (std::int64_t m : digits) s += m;
  return s;
}

PressureEstimate gauss_pressure(double q, double b, int n, int L, double alpha) {
  return TransferEngine::gauss(L, kGaussNodes).pressure({alpha, q, b}, n);
}

double gauss_dim_restricted(int nmax, double tol) {
  if (nmax < 1) throw Error(ErrorKind::InvalidArgument, "digit cap must be >= 1");
  if (nmax == 1) return 0.0;
  return bowen_dimension(TransferEngine::gauss(kDefaultTruncation, kGaussNodes, nmax), tol).s;
}

double hensley_two_term(int n) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double dn = static_cast<double>(n);
  return 1.0 - 6.0 / (pi2 * dn) - 72.0 * std::log(dn) / (pi2 * pi2 * dn * dn);
}

SpectrumPoint gauss_spectrum(double alpha, double tol, int n, int L) {
  if (!(alpha > 1.0)) throw Error(ErrorKind::InvalidArgument, "the digit average must exceed 1");
  return solve_spectrum(TransferEngine::gauss(L, kGaussNodes), alpha, tol, n);
}

GaussRateReport gauss_rate_check(const std::vector<double>& alpha_grid, double tol, int n, int L) {
  if (alpha_grid.size() < 5) throw Error(ErrorKind::InvalidArgument, "rate check needs at least 5 points");
  const TransferEngine engine = TransferEngine::gauss(L, kGaussNodes);
  GaussRateReport rep{};
  std::vector<double> a, loga, y;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const GridEntry& e : spectrum_grid(engine, alpha_grid, tol, n)) {
    if (!e.point) throw Error(*e.error, e.message);
    const SpectrumPoint& p = *e.point;
    rep.points.push_back(p);
    const double gap = 1.0 - p.b;
    if (!(gap > 0.0)) throw Error(ErrorKind::Unstable, "computed spectrum reached 1");
    a.push_back(p.alpha);
    loga.push_back(std::log(p.alpha));
    y.push_back(std::log(gap));
    const double scaled = gap * std::exp2(p.alpha);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  const LinearFit lin = linear_fit(a, y);
  rep.base = std::exp(lin.slope);
  rep.loglinear_r2 = lin.r2;
  rep.powerlaw_r2 = linear_fit(loga, y).r2;
  rep.scaled_max_min = hi / lo;
  return rep;
}

}  // namespace cuspwind
