#include "cuspwind/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>

namespace cuspwind {

namespace {

constexpr double kTailEscalation = 0.01;

struct Root {
  double lo, hi;
};

template <class F>
Root bracketed_root(F&& f, double lo, double hi, double flo, double fhi, double width) {
  std::uintmax_t iters = 200;
  auto stop = [width](double a, double b) { return std::abs(b - a) <= width; };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  return {r.first, r.second};
}

// β(q): the unique b ≥ 0 with p(α, q, b) = 0.
double inner_root(const TransferEngine& engine, double alpha, double q, int n) {
  auto f = [&](double b) { return engine.pressure({alpha, q, b}, n).value; };
  const double f0 = f(0.0);
  if (!(f0 > 0.0)) throw Error(ErrorKind::BracketFailure, "pressure is not positive at b = 0");
  double hi = 1.0, fhi = f(hi);
  while (fhi > 0.0) {
    hi *= 2.0;
    if (hi > 64.0) throw Error(ErrorKind::BracketFailure, "no sign change in b up to 64");
    fhi = f(hi);
  }
  const Root r = bracketed_root(f, 0.0, hi, f0, fhi, 1e-14);
  return 0.5 * (r.lo + r.hi);
}

}  // namespace

DimensionResult bowen_dimension(const TransferEngine& engine, double tol, int n) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const double lo = engine.has_tail() ? 0.5 + 1e-6 : 0.0;
  const double hi = 1.0;
  auto P = [&](double b) { return engine.pressure({0.0, 0.0, b}, n); };
  const PressureEstimate plo = P(lo), phi = P(hi);
  if (plo.value == 0.0) return {lo, lo, lo, plo.iterations, engine.L()};
  if (!(plo.value > 0.0) || !(phi.value < 0.0)) {
    throw Error(ErrorKind::NoSignChange, "pressure does not change sign on the dimension interval (P(lo) = " +
                                             std::to_string(plo.value) + ", P(1) = " + std::to_string(phi.value) +
                                             ")");
  }
  auto f = [&](double b) { return P(b).value; };
  const Root r = bracketed_root(f, lo, hi, plo.value, phi.value, std::min(tol, 1e-13));
  const double s = 0.5 * (r.lo + r.hi);
  const SpectralData sd = engine.spectral({0.0, 0.0, s}, n);
  // Pressure uncertainty mapped through the slope -λ.
  const double spread = std::max(sd.estimate.upper - sd.pressure, sd.pressure - sd.estimate.lower);
  const double ds = std::max(sd.estimate.tail_bound, std::min(spread, 1e-12)) / sd.lyapunov;
  return {s, r.lo - ds, r.hi + ds, std::max(n, sd.estimate.iterations), engine.L()};
}

DimensionResult bowen_dimension(const GeneratorSet& G, double tol, int n, int L, Alphabet alphabet) {
  return bowen_dimension(TransferEngine::schottky(G, alphabet, L), tol, n);
}

SpectrumPoint solve_spectrum(const TransferEngine& engine, double alpha, double tol, int n) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  auto dq = [&](double u) {
    const double q = std::exp(u);
    const double b = inner_root(engine, alpha, q, n);
    return engine.spectral({alpha, q, b}, n).dp_dq;
  };
  double lo = std::log(1e-8), hi = std::log(2.0);
  double flo = dq(lo);
  // Large q pushes β(q) far above 1 where the collocation loses accuracy;
  // retreat the upper probe until it is evaluable.
  double fhi = 0.0;
  for (;;) {
    try {
      fhi = dq(hi);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unstable && e.kind() != ErrorKind::BracketFailure) throw;
      hi -= std::log(4.0);
      if (hi <= lo) throw Error(ErrorKind::BracketFailure, "no evaluable upper q probe");
    }
  }
  for (int k = 0; fhi < 0.0 && k < 8; ++k) {
    lo = hi;
    flo = fhi;
    hi += std::log(4.0);
    fhi = dq(hi);
  }
  for (int k = 0; flo > 0.0 && k < 4; ++k) {
    hi = lo;
    fhi = flo;
    lo -= std::log(100.0);
    flo = dq(lo);
  }
  if (!(flo < 0.0) || !(fhi > 0.0)) {
    throw Error(ErrorKind::BracketFailure, "dp/dq has no sign change on the q bracket for alpha = " +
                                               std::to_string(alpha));
  }
  const Root r = bracketed_root(dq, lo, hi, flo, fhi, 1e-13);
  const double q = std::exp(0.5 * (r.lo + r.hi));
  const double b = inner_root(engine, alpha, q, n);
  const SpectralData sd = engine.spectral({alpha, q, b}, n);
  SpectrumPoint pt;
  pt.alpha = alpha;
  pt.q = q;
  pt.b = b;
  pt.lyapunov = sd.lyapunov;
  pt.residual_p = std::abs(sd.pressure);
  pt.residual_dq = std::abs(sd.dp_dq);
  pt.n_used = std::max(n, sd.estimate.iterations);
  pt.L_used = engine.L();
  if (pt.residual_p > tol || pt.residual_dq > 100.0 * tol) {
    throw Error(ErrorKind::BracketFailure, "residuals above tolerance at alpha = " + std::to_string(alpha));
  }
  return pt;
}

SpectrumPoint solve_spectrum(const GeneratorSet& G, double alpha, double tol, int n, int L) {
  for (int scale = 1;; scale *= 2) {
    const TransferEngine engine = TransferEngine::schottky(G, Alphabet::Full, L * scale);
    const SpectrumPoint pt = solve_spectrum(engine, alpha, tol, n);
    const double tail = engine.pressure({alpha, pt.q, pt.b}, n).tail_bound;
    if (tail <= kTailEscalation || scale >= 16) return pt;
  }
}

double lyapunov(const GeneratorSet& G, const SpectrumPoint& point, int n, int L) {
  return equilibrium_average(G, {point.alpha, point.q, point.b}, Observable::LogDeriv, n, L);
}

int worker_threads() {
  if (const char* env = std::getenv("CUSPWIND_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<GridEntry> spectrum_grid(const TransferEngine& engine, const std::vector<double>& alphas, double tol,
                                     int n) {
  std::vector<GridEntry> out(alphas.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < alphas.size(); i = next++) {
      GridEntry& e = out[i];
      e.alpha = alphas[i];
      try {
        e.point = solve_spectrum(engine, alphas[i], tol, n);
      } catch (const Error& err) {
        e.error = err.kind();
        e.message = err.what();
      }
    }
  };
  const int threads = std::min<int>(worker_threads(), static_cast<int>(alphas.size()));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  return out;
}

std::vector<GridEntry> spectrum_grid(const GeneratorSet& G, const std::vector<double>& alphas, double tol, int n,
                                     int L) {
  return spectrum_grid(TransferEngine::schottky(G, Alphabet::Full, L), alphas, tol, n);
}

}  // namespace cuspwind
