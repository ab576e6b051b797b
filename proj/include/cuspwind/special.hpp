#pragma once

#include <vector>

namespace cuspwind {

/// Γ(x) on (0, 2); x must be at least 1e-6.
double gamma_fn(double x);

/// Riemann ζ(s) for real s ≥ 0, s ≠ 1, through the alternating series
/// η(s) with Cohen–Villegas–Zagier acceleration.
double zeta_fn(double s);

/// Generalized exponential integral E_s(x) = ∫_1^∞ e^{-xt} t^{-s} dt for
/// x > 0 (any real s) or x = 0 with s > 1.
double expint_general(double s, double x);

/// Validated (b, q) with b ∈ (1/2, 1), q > 0.
struct DirichletQuery {
  double b;
  double q;
  static DirichletQuery make(double b, double q);
};

/// K_b(q) = Σ_{l≥1} e^{-lq} l^{1-2b} by direct compensated summation; the
/// sum is stopped once the geometric tail bound drops below rel_tol times
/// the partial sum. Accepts any b ≥ 1/2 and q > 0.
double dirichlet_K(double b, double q, double rel_tol = 1e-14);
double dirichlet_K(const DirichletQuery& query, double rel_tol = 1e-14);

/// Γ(2 - 2b) q^{2b-2} + ζ(2b - 1).
double mellin_principal(double b, double q);

struct ComparabilityRow {
  double q;
  double K;
  double leading;  // Γ(2 - 2b) q^{2b-2}
  double ratio;    // K / leading
};

struct ComparabilityTable {
  double b;
  std::vector<ComparabilityRow> rows;
  double Z;  // max over rows of max(ratio, 1/ratio)
};

/// Ratios K_b(q) / (Γ(2 - 2b) q^{2b-2}) over a decreasing positive grid.
ComparabilityTable comparability_check(double b, const std::vector<double>& q_grid, double rel_tol = 1e-14);

}  // namespace cuspwind
