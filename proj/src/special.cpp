#include "cuspwind/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cuspwind/error.hpp"

namespace cuspwind {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

double gamma_fn(double x) {
  if (!(x >= 1e-6 && x < 2.0)) {
    throw Error(ErrorKind::OutOfRange, "gamma_fn needs x in [1e-6, 2), got " + std::to_string(x));
  }
  return std::tgamma(x);
}

double zeta_fn(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::OutOfRange, "zeta_fn needs s >= 0, got " + std::to_string(s));
  }
  if (std::abs(s - 1.0) <= 1e-4) {
    throw Error(ErrorKind::NearPole, "zeta_fn too close to the pole at s = 1");
  }
  // Cohen, Rodriguez Villegas, Zagier, Algorithm 1; error about 5.8^{-n}.
  constexpr int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d;
  CompensatedSum eta;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    eta.add(c * std::pow(k + 1.0, -s));
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  // 1 - 2^{1-s} without cancellation near s = 1.
  return (eta.value() / d) / -std::expm1((1.0 - s) * std::numbers::ln2);
}

double expint_general(double s, double x) {
  if (x == 0.0) {
    if (s > 1.0) return 1.0 / (s - 1.0);
    return std::numeric_limits<double>::infinity();
  }
  if (!(x > 0.0)) throw Error(ErrorKind::OutOfRange, "expint_general needs x >= 0");
  if (s <= 0.0) return std::pow(x, s - 1.0) * boost::math::tgamma(1.0 - s, x);
  // Start at s0 ∈ (0, 1] and recur upward: E_{t+1} = (e^{-x} - x E_t)/t.
  double s0 = s - std::floor(s);
  if (s0 == 0.0) s0 = 1.0;
  double e = s0 == 1.0 ? boost::math::expint(1, x) : std::pow(x, s0 - 1.0) * boost::math::tgamma(1.0 - s0, x);
  const double ex = std::exp(-x);
  for (double t = s0; t + 0.5 < s; t += 1.0) e = (ex - x * e) / t;
  return e;
}

DirichletQuery DirichletQuery::make(double b, double q) {
  if (!(b > 0.5 && b < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "Dirichlet query needs b in (1/2, 1), got " + std::to_string(b));
  }
  if (!(q > 0.0)) throw Error(ErrorKind::OutOfRange, "Dirichlet query needs q > 0");
  return {b, q};
}

double dirichlet_K(double b, double q, double rel_tol) {
  if (!(b >= 0.5) || !(q > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "dirichlet_K needs b >= 1/2 and q > 0");
  }
  const double expo = 1.0 - 2.0 * b;
  const double decay = std::exp(-q);
  const double inv_gap = 1.0 / -std::expm1(-q);
  CompensatedSum sum;
  double eq = 1.0;
  for (long long l = 1;; ++l) {
    // Refresh the geometric factor periodically to stop drift.
    eq = (l % 1024 == 1) ? std::exp(-q * static_cast<double>(l)) : eq * decay;
    const double lf = static_cast<double>(l);
    const double term = eq * (expo == 0.0 ? 1.0 : std::exp(expo * std::log(lf)));
    sum.add(term);
    if (term == 0.0) break;
    if (l % 64 == 0) {
      // Terms are nonincreasing, so Σ_{k>l} ≤ e^{-(l+1)q} l^{1-2b}/(1 - e^{-q}).
      const double tail = term * decay * inv_gap;
      if (tail < rel_tol * sum.value()) break;
    }
  }
  return sum.value();
}

double dirichlet_K(const DirichletQuery& query, double rel_tol) { return dirichlet_K(query.b, query.q, rel_tol); }

double mellin_principal(double b, double q) {
  if (!(b > 0.5 && b < 1.0) || !(q > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "mellin_principal needs b in (1/2, 1) and q > 0");
  }
  return gamma_fn(2.0 - 2.0 * b) * std::pow(q, 2.0 * b - 2.0) + zeta_fn(2.0 * b - 1.0);
}

ComparabilityTable comparability_check(double b, const std::vector<double>& q_grid, double rel_tol) {
  ComparabilityTable table{b, {}, 1.0};
  for (double q : q_grid) {
    const DirichletQuery query = DirichletQuery::make(b, q);
    ComparabilityRow row;
    row.q = q;
    row.K = dirichlet_K(query, rel_tol);
    row.leading = gamma_fn(2.0 - 2.0 * b) * std::pow(q, 2.0 * b - 2.0);
    row.ratio = row.K / row.leading;
    table.Z = std::max({table.Z, row.ratio, 1.0 / row.ratio});
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace cuspwind
