#include "cuspwind/pressure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <optional>

#include "cuspwind/error.hpp"
#include "cuspwind/special.hpp"

namespace cuspwind {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kTailCap = 1e30;   // continuous tail grid ends here; closed form beyond
constexpr double kPanelWidth = 0.5;  // in log l

// Chebyshev points of the second kind with barycentric weights.
struct Collocation {
  int N;
  std::vector<double> t, w;
  explicit Collocation(int n) : N(n), t(n), w(n) {
    for (int j = 0; j < n; ++j) {
      t[j] = std::cos(std::numbers::pi * j / (n - 1));
      w[j] = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
    }
  }
  void basis(double s, double* out) const {
    s = std::clamp(s, -1.0, 1.0);
    for (int j = 0; j < N; ++j) {
      if (std::abs(s - t[j]) < 1e-15) {
        std::fill(out, out + N, 0.0);
        out[j] = 1.0;
        return;
      }
    }
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
      out[j] = w[j] / (s - t[j]);
      total += out[j];
    }
    for (int j = 0; j < N; ++j) out[j] /= total;
  }
};

enum TermKind : unsigned char { kDirect = 0, kDirectLast = 1, kEulerPlus = 2, kTailGrid = 3 };

// Σ_{l > X} of e^{-q(l - c0)} pref^b l^{-2b}, closed form in E_s.
struct Remainder {
  int row;
  int dest;
  double log_pref;
  double c0;
  std::vector<double> basis;
};

double remainder_weight(double log_pref, double c0, double q, double b) {
  return std::exp(b * log_pref + q * c0 + (1.0 - 2.0 * b) * std::log(kTailCap)) *
         expint_general(2.0 * b, q * kTailCap);
}

// Contribution to Σ a₁ w, i.e. minus the q-derivative of remainder_weight.
double remainder_a1(double log_pref, double c0, double q, double b) {
  const double x = q * kTailCap;
  const double base = std::exp(b * log_pref + q * c0);
  return base * (std::exp((2.0 - 2.0 * b) * std::log(kTailCap)) * expint_general(2.0 * b - 1.0, x) -
                 c0 * std::exp((1.0 - 2.0 * b) * std::log(kTailCap)) * expint_general(2.0 * b, x));
}

struct PerronResult {
  double rho;
  double lower;  // bracket at the requested word length
  double upper;
  int iterations;
  Eigen::VectorXd vec;
};

PerronResult perron(const RowMatrix& M, int n, bool transpose) {
  const Eigen::Index dim = M.rows();
  Eigen::VectorXd g = Eigen::VectorXd::Ones(dim);
  PerronResult res{0.0, 0.0, 0.0, 0, g};
  constexpr int kMaxIter = 20000;
  for (int k = 1; k <= kMaxIter; ++k) {
    Eigen::VectorXd h = transpose ? Eigen::VectorXd(M.transpose() * g) : Eigen::VectorXd(M * g);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (g[i] <= 0.0) continue;
      const double r = h[i] / g[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (!(hi > 0.0) || !std::isfinite(hi)) {
      throw Error(ErrorKind::Unstable, "transfer operator lost positivity");
    }
    if (k == n) {
      res.lower = lo;
      res.upper = hi;
    }
    g = h / h.cwiseAbs().maxCoeff();
    if (k >= n && hi - lo <= 1e-13 * hi) {
      res.rho = 0.5 * (lo + hi);
      res.iterations = k;
      res.vec = g;
      return res;
    }
  }
  throw Error(ErrorKind::Unstable, "power iteration did not converge");
}

}  // namespace

const char* to_string(PressureMethod m) noexcept {
  return m == PressureMethod::WordSumRatio ? "word_sum_ratio" : "word_sum_direct";
}

bool finiteness_region(double q, double b) noexcept { return (q > 0.0 && b >= 0.0) || (q == 0.0 && b > 0.5); }

struct TransferEngine::Impl {
  enum class Kind { Schottky, Gauss };
  Kind kind;
  Alphabet alphabet = Alphabet::Full;
  std::optional<GeneratorSet> G;
  int L = 0;
  bool tail = false;
  int arcs = 0;
  double a1_offset = 0.0;  // a₁ stored minus this offset (keeps e^{-q a₁} from underflowing)
  Collocation col;

  // Terms, structure of arrays, grouped by row.
  std::vector<std::size_t> row_begin;
  std::vector<int> dest;
  std::vector<double> lp, a1, wt, basis;
  std::vector<unsigned char> kind_of;
  std::vector<Remainder> rem;

  Impl(Kind k, int nodes) : kind(k), col(nodes) {}

  int N() const { return col.N; }
  int dim() const { return arcs * col.N; }

  void add_term(int d, double x_local, double lp_, double a1_, double wt_, unsigned char kd) {
    dest.push_back(d);
    lp.push_back(lp_);
    a1.push_back(a1_);
    wt.push_back(wt_);
    kind_of.push_back(kd);
    const std::size_t off = basis.size();
    basis.resize(off + static_cast<std::size_t>(N()));
    col.basis(x_local, basis.data() + off);
  }

  // Tail nodes on a log-l grid: Gauss–Legendre panels over [L + 1/2, cap].
  std::vector<std::pair<double, double>> tail_nodes() const {
    static const auto& gx = boost::math::quadrature::gauss<double, 8>::abscissa();
    static const auto& gw = boost::math::quadrature::gauss<double, 8>::weights();
    std::vector<std::pair<double, double>> out;
    const double u0 = std::log(L + 0.5), u1 = std::log(kTailCap);
    const int panels = static_cast<int>(std::ceil((u1 - u0) / kPanelWidth));
    const double h = (u1 - u0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = u0 + (p + 0.5) * h;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        for (int sgn : {-1, 1}) {
          if (gx[i] == 0.0 && sgn < 0) continue;
          const double u = mid + sgn * 0.5 * h * gx[i];
          const double l = std::exp(u);
          out.emplace_back(l, 0.5 * h * gw[i] * l);
        }
      }
    }
    return out;
  }

  double local(int arc, cplx x) const {
    const Arc& a = G->arc(arc);
    return a.local(std::arg(x));
  }

  void build_schottky() {
    const GeneratorSet& g = *G;
    arcs = alphabet == Alphabet::Full ? g.num_letters() : g.num_hyperbolic_letters();
    const auto tnodes = tail ? tail_nodes() : std::vector<std::pair<double, double>>{};
    for (int e = 0; e < arcs; ++e) {
      for (int j = 0; j < N(); ++j) {
        const int row = e * N() + j;
        row_begin.push_back(dest.size());
        const cplx y = boundary_point(g.arc(e).from_local(col.t[j]));
        for (int h = 0; h < g.num_hyperbolic_letters(); ++h) {
          if (h == inverse_letter(e)) continue;
          const MobiusMap hinv = g.map(h).inverse();
          const cplx z = apply(hinv, y);
          const double lph = std::log(deriv_mod(hinv, y));
          add_term(h, local(h, z), lph, 0.0, 1.0, kDirect);
          if (alphabet != Alphabet::Full) continue;
          for (int sign : {1, -1}) {
            const int first = g.parabolic_letter(sign);
            const MobiusMap& gi = g.map(g.parabolic_letter(-sign));  // γ_σ⁻¹
            const cplx na = gi.a() - 1.0, nb = gi.b();
            const cplx A = std::conj(nb) * z + std::conj(na);
            auto branch = [&](double l, double w, unsigned char kd) {
              const cplx den = 1.0 + l * A;
              const cplx x = ((1.0 + l * na) * z + l * nb) / den;
              add_term(first, local(first, x), lph - 2.0 * std::log(std::abs(den)), l - 1.0, w, kd);
            };
            for (int l = 1; l <= L; ++l) {
              branch(l, l == L && tail ? 1.0 - 1.0 / 24.0 : 1.0, l == L ? kDirectLast : kDirect);
            }
            if (!tail) continue;
            branch(L + 1.0, 1.0 / 24.0, kEulerPlus);
            for (const auto& [l, w] : tnodes) branch(l, w, kTailGrid);
            Remainder r{row, first, lph - 2.0 * std::log(std::abs(A)), 1.0, std::vector<double>(N())};
            const cplx xinf = ((1.0 + kTailCap * na) * z + kTailCap * nb) / (1.0 + kTailCap * A);
            col.basis(local(first, xinf), r.basis.data());
            rem.push_back(std::move(r));
          }
        }
      }
    }
    row_begin.push_back(dest.size());
  }

  void build_gauss(int digit_cap) {
    arcs = 1;
    const auto tnodes = tail ? tail_nodes() : std::vector<std::pair<double, double>>{};
    const int direct = digit_cap > 0 ? digit_cap : L;
    for (int j = 0; j < N(); ++j) {
      row_begin.push_back(dest.size());
      const double y = 0.5 * (1.0 + col.t[j]);
      auto branch = [&](double m, double w, unsigned char kd) {
        const double x = 1.0 / (m + y);
        add_term(0, 2.0 * x - 1.0, -2.0 * std::log(m + y), m - 1.0, w, kd);
      };
      for (int m = 1; m <= direct; ++m) {
        branch(m, m == direct && tail ? 1.0 - 1.0 / 24.0 : 1.0, m == direct ? kDirectLast : kDirect);
      }
      if (!tail) continue;
      branch(L + 1.0, 1.0 / 24.0, kEulerPlus);
      for (const auto& [m, w] : tnodes) branch(m, w, kTailGrid);
      Remainder r{j, 0, 0.0, 1.0, std::vector<double>(N())};
      col.basis(-1.0, r.basis.data());
      rem.push_back(std::move(r));
    }
    row_begin.push_back(dest.size());
  }

  struct Assembled {
    RowMatrix M, MA1, MLP;
    double tail_rel = 0.0;
    double tail_mass = 0.0;
  };

  Assembled assemble(double q, double b, bool derivs) const {
    const int n = dim();
    Assembled out;
    out.M = RowMatrix::Zero(n, n);
    if (derivs) {
      out.MA1 = RowMatrix::Zero(n, n);
      out.MLP = RowMatrix::Zero(n, n);
    }
    const std::size_t Nn = static_cast<std::size_t>(N());
    for (int r = 0; r < n; ++r) {
      double total = 0.0, tail_sum = 0.0, euler = 0.0;
      double* Mrow = out.M.row(r).data();
      for (std::size_t t = row_begin[r]; t < row_begin[r + 1]; ++t) {
        const double e = std::exp(-q * a1[t] + b * lp[t]);
        if (e == 0.0) continue;
        const double w = wt[t] * e;
        total += w;
        switch (kind_of[t]) {
          case kDirectLast: euler -= e / 24.0; break;
          case kEulerPlus: euler += w; tail_sum += w; break;
          case kTailGrid: tail_sum += w; break;
          default: break;
        }
        const double* B = basis.data() + t * Nn;
        double* Mblk = Mrow + static_cast<std::size_t>(dest[t]) * Nn;
        for (std::size_t j = 0; j < Nn; ++j) Mblk[j] += w * B[j];
        if (derivs) {
          double* Ablk = out.MA1.row(r).data() + static_cast<std::size_t>(dest[t]) * Nn;
          double* Lblk = out.MLP.row(r).data() + static_cast<std::size_t>(dest[t]) * Nn;
          const double wa = w * a1[t], wl = w * lp[t];
          for (std::size_t j = 0; j < Nn; ++j) {
            Ablk[j] += wa * B[j];
            Lblk[j] += wl * B[j];
          }
        }
      }
      out.tail_rel = std::max(out.tail_rel, std::abs(euler) / total);
      out.tail_mass = std::max(out.tail_mass, tail_sum / total);
    }
    if (q * kTailCap < 700.0) {
      for (const Remainder& rm : rem) {
        const double w = remainder_weight(rm.log_pref, rm.c0, q, b);
        const std::size_t off = static_cast<std::size_t>(rm.dest) * Nn;
        for (std::size_t j = 0; j < Nn; ++j) out.M(rm.row, off + j) += w * rm.basis[j];
        if (derivs) {
          const double h = 1e-6;
          const double wl = (remainder_weight(rm.log_pref, rm.c0, q, b + h) -
                             remainder_weight(rm.log_pref, rm.c0, q, b - h)) / (2.0 * h);
          const double wa = q > 0.0 ? remainder_a1(rm.log_pref, rm.c0, q, b)
                                    : std::numeric_limits<double>::infinity();
          for (std::size_t j = 0; j < Nn; ++j) {
            out.MA1(rm.row, off + j) += wa * rm.basis[j];
            out.MLP(rm.row, off + j) += wl * rm.basis[j];
          }
        }
      }
    }
    return out;
  }

  void check(const PotentialParams& p, int n) const {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "word length n must be at least 2");
    if (!std::isfinite(p.q) || !std::isfinite(p.b) || !std::isfinite(p.alpha)) {
      throw Error(ErrorKind::InvalidArgument, "non-finite potential parameters");
    }
    if (tail && !finiteness_region(p.q, p.b)) {
      throw Error(ErrorKind::DivergentSum, "(q, b) = (" + std::to_string(p.q) + ", " + std::to_string(p.b) +
                                               ") lies outside the finiteness region");
    }
    if (tail && L < 10) {
      throw Error(ErrorKind::TruncationDominates, "truncation L = " + std::to_string(L) + " is below 10");
    }
  }

  PressureEstimate estimate(const PotentialParams& p, int n, const Assembled& A, const PerronResult& pr) const {
    if (A.tail_rel > 0.1) {
      throw Error(ErrorKind::TruncationDominates, "tail correction exceeds 10% of the single-symbol sum");
    }
    PressureEstimate est;
    const double shift = p.q * (p.alpha - a1_offset);
    est.value = shift + std::log(pr.rho);
    est.lower = std::min(est.value, shift + std::log(pr.lower)) - A.tail_rel;
    est.upper = std::max(est.value, shift + std::log(pr.upper)) + A.tail_rel;
    est.n = n;
    est.L = L;
    est.tail_bound = A.tail_rel;
    est.tail_mass = A.tail_mass;
    est.iterations = pr.iterations;
    est.method = PressureMethod::WordSumRatio;
    return est;
  }
};

TransferEngine::TransferEngine(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
TransferEngine::TransferEngine(TransferEngine&&) noexcept = default;
TransferEngine& TransferEngine::operator=(TransferEngine&&) noexcept = default;
TransferEngine::~TransferEngine() = default;

TransferEngine TransferEngine::schottky(const GeneratorSet& G, Alphabet alphabet, int L, int nodes) {
  if (nodes < 4) throw Error(ErrorKind::InvalidArgument, "need at least 4 collocation nodes");
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "truncation L must be positive");
  auto impl = std::make_unique<Impl>(Impl::Kind::Schottky, nodes);
  impl->alphabet = alphabet;
  impl->G = G;
  impl->L = L;
  impl->tail = alphabet == Alphabet::Full;
  impl->build_schottky();
  return TransferEngine(std::move(impl));
}

TransferEngine TransferEngine::gauss(int L, int nodes, int digit_cap) {
  if (nodes < 4) throw Error(ErrorKind::InvalidArgument, "need at least 4 collocation nodes");
  if (digit_cap < 0) throw Error(ErrorKind::InvalidArgument, "digit cap must be nonnegative");
  if (digit_cap == 0 && L < 1) throw Error(ErrorKind::InvalidArgument, "truncation L must be positive");
  auto impl = std::make_unique<Impl>(Impl::Kind::Gauss, nodes);
  impl->L = digit_cap > 0 ? digit_cap : L;
  impl->tail = digit_cap == 0;
  impl->a1_offset = 1.0;
  impl->build_gauss(digit_cap);
  return TransferEngine(std::move(impl));
}

int TransferEngine::L() const noexcept { return impl_->L; }
int TransferEngine::nodes() const noexcept { return impl_->N(); }
bool TransferEngine::has_tail() const noexcept { return impl_->tail; }
int TransferEngine::size() const noexcept { return impl_->dim(); }

PressureEstimate TransferEngine::pressure(const PotentialParams& p, int n) const {
  impl_->check(p, n);
  const auto A = impl_->assemble(p.q, p.b, false);
  const PerronResult pr = perron(A.M, n, false);
  return impl_->estimate(p, n, A, pr);
}

SpectralData TransferEngine::spectral(const PotentialParams& p, int n) const {
  impl_->check(p, n);
  const auto A = impl_->assemble(p.q, p.b, true);
  const PerronResult right = perron(A.M, n, false);
  const PerronResult left = perron(A.M, 2, true);
  const Eigen::VectorXd& u = right.vec;
  const Eigen::VectorXd& v = left.vec;
  const double denom = v.dot(A.M * u);
  SpectralData out;
  out.estimate = impl_->estimate(p, n, A, right);
  out.pressure = out.estimate.value;
  out.a1_average = v.dot(A.MA1 * u) / denom + impl_->a1_offset;
  out.dp_dq = p.alpha - out.a1_average;
  out.dp_db = v.dot(A.MLP * u) / denom;
  out.lyapunov = -out.dp_db;
  return out;
}

double TransferEngine::gibbs_max_ratio(const PotentialParams& p, int n, int max_power) const {
  const Impl& im = *impl_;
  if (im.kind != Impl::Kind::Schottky) {
    throw Error(ErrorKind::InvalidArgument, "Gibbs check needs a Schottky engine");
  }
  im.check(p, n);
  const GeneratorSet& G = *im.G;
  const auto A = im.assemble(p.q, p.b, false);
  const PerronResult right = perron(A.M, n, false);
  const PerronResult left = perron(A.M, 2, true);
  const Eigen::VectorXd u = right.vec;
  const Eigen::VectorXd v = left.vec / left.vec.dot(right.vec);
  const int N = im.N();

  std::vector<Symbol> symbols;
  for (int h = 0; h < G.num_hyperbolic_letters(); ++h) {
    symbols.push_back(Symbol::hyp(h));
    if (im.alphabet != Alphabet::Full) continue;
    for (int sign : {1, -1}) {
      for (int l = 1; l <= max_power; ++l) symbols.push_back(Symbol::par(sign, l, h));
    }
  }
  std::vector<double> B(static_cast<std::size_t>(N));
  double worst = 1.0;
  for (const Symbol& s1 : symbols) {
    for (const Symbol& s2 : symbols) {
      if (!admissible(s1, s2)) continue;
      const Word w{s1, s2};
      const MobiusMap F = element(G, w);
      const MobiusMap psi = F.inverse();
      const Arc cyl = cylinder_arc(G, w);
      const double log_mid = std::log(deriv_mod(F, boundary_point(cyl.center)));
      const int first = s1.first_letter(G);
      double mass = 0.0;
      for (int e = 0; e < im.arcs; ++e) {
        if (e == inverse_letter(s2.last_letter())) continue;
        for (int j = 0; j < N; ++j) {
          const cplx y = boundary_point(G.arc(e).from_local(im.col.t[j]));
          const cplx x = apply(psi, y);
          const double lpw = std::log(deriv_mod(psi, y));
          im.col.basis(G.arc(first).local(std::arg(x)), B.data());
          double ux = 0.0;
          for (int k = 0; k < N; ++k) ux += B[static_cast<std::size_t>(k)] * u[first * N + k];
          mass += v[e * N + j] * ux * std::exp(p.b * (lpw + log_mid));
        }
      }
      if (!(mass > 0.0)) throw Error(ErrorKind::Unstable, "non-positive Gibbs mass");
      worst = std::max({worst, mass, 1.0 / mass});
    }
  }
  return worst;
}

PressureEstimate pressure(const GeneratorSet& G, const PotentialParams& p, int n, int L, Alphabet alphabet) {
  return TransferEngine::schottky(G, alphabet, L).pressure(p, n);
}

double equilibrium_average(const GeneratorSet& G, const PotentialParams& p, Observable observable, int n, int L) {
  if (observable == Observable::A1 && !(p.q > 0.0)) {
    throw Error(ErrorKind::DivergentSum, "the a1 average needs q > 0");
  }
  const SpectralData sd = TransferEngine::schottky(G, Alphabet::Full, L).spectral(p, n);
  return observable == Observable::A1 ? sd.a1_average : sd.lyapunov;
}

double gibbs_bracket_check(const GeneratorSet& G, const PotentialParams& p, int n, int L, Alphabet alphabet) {
  return TransferEngine::schottky(G, alphabet, L).gibbs_max_ratio(p, n);
}

}  // namespace cuspwind
