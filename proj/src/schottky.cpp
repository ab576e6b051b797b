#include "cuspwind/schottky.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "cuspwind/error.hpp"

namespace cuspwind {

namespace {

Arc compute_hull(const std::vector<Arc>& arcs, int letter) {
  const Arc& excluded = arcs[static_cast<std::size_t>(inverse_letter(letter))];
  const double origin = excluded.end();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int e = 0; e < static_cast<int>(arcs.size()); ++e) {
    if (e == inverse_letter(letter)) continue;
    double off = wrap_angle(arcs[static_cast<std::size_t>(e)].start() - origin);
    // An arc touching the excluded one at its end point (the parabolic pair).
    if (off > kTwoPi - 1e-9) off = 0.0;
    lo = std::min(lo, off);
    hi = std::max(hi, off + arcs[static_cast<std::size_t>(e)].length());
  }
  return Arc(origin + 0.5 * (lo + hi), 0.5 * (hi - lo));
}

// Exactly parabolic representative: a = 1 + ic, |b| = |c|.
MobiusMap snap_parabolic(const MobiusMap& g) {
  cplx a = g.a(), b = g.b();
  if (a.real() < 0.0) {
    a = -a;
    b = -b;
  }
  const double c = a.imag();
  return MobiusMap::unchecked(cplx(1.0, c), b * (std::abs(c) / std::abs(b)));
}

}  // namespace

MobiusMap GeneratorSet::parabolic_power(int sign, double l) const {
  const MobiusMap& g = map(parabolic_letter(sign));
  return MobiusMap::unchecked(1.0 + l * (g.a() - 1.0), l * g.b());
}

std::string GeneratorSet::letter_name(int letter) const {
  if (is_parabolic(letter)) return letter == 2 * n_hyp_ ? "g" : "g^-1";
  std::string s = "h" + std::to_string(letter / 2 + 1);
  if (letter & 1) s += "^-1";
  return s;
}

std::vector<std::pair<MobiusMap, MobiusMap>> GeneratorSet::hyperbolic_pairs() const {
  std::vector<std::pair<MobiusMap, MobiusMap>> out;
  for (int i = 0; i < n_hyp_; ++i) out.emplace_back(maps_[2 * i], maps_[2 * i + 1]);
  return out;
}

std::pair<MobiusMap, MobiusMap> GeneratorSet::parabolic_pair() const {
  return {maps_[2 * n_hyp_], maps_[2 * n_hyp_ + 1]};
}

GeneratorSet validate_generators(const std::vector<std::pair<MobiusMap, MobiusMap>>& hyperbolic,
                                 const std::pair<MobiusMap, MobiusMap>& parabolic) {
  if (hyperbolic.empty()) {
    throw Error(ErrorKind::InvalidArgument, "at least one hyperbolic pair is required");
  }
  GeneratorSet G;
  G.n_hyp_ = static_cast<int>(hyperbolic.size());

  auto check_inverse = [](const std::pair<MobiusMap, MobiusMap>& pr, const std::string& name) {
    if (!(pr.first * pr.second).is_identity(1e-10)) {
      throw Error(ErrorKind::InverseMismatch, name + ": listed inverse is not the inverse");
    }
  };
  for (std::size_t i = 0; i < hyperbolic.size(); ++i) {
    const std::string name = "hyperbolic pair " + std::to_string(i + 1);
    check_inverse(hyperbolic[i], name);
    const MobiusMap& h = hyperbolic[i].first;
    if (h.is_identity(1e-10) || classify(h) != MapClass::Hyperbolic) {
      throw Error(ErrorKind::NotHyperbolic, name + " is not hyperbolic");
    }
    G.maps_.push_back(h);
    G.maps_.push_back(h.inverse());
  }
  check_inverse(parabolic, "parabolic pair");
  if (parabolic.first.is_identity(1e-10) || classify(parabolic.first) != MapClass::Parabolic) {
    throw Error(ErrorKind::NotParabolic, "parabolic generator is not parabolic");
  }
  const MobiusMap gamma = snap_parabolic(parabolic.first);
  G.maps_.push_back(gamma);
  G.maps_.push_back(gamma.inverse());

  for (const MobiusMap& g : G.maps_) G.arcs_.push_back(isometry_arc(g));

  // Schottky condition: arcs of distinct pairs (and the two arcs of a
  // hyperbolic pair) are disjoint with positive gap.
  const int nl = G.num_letters();
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nl; ++i) {
    for (int j = i + 1; j < nl; ++j) {
      if (G.is_parabolic(i) && G.is_parabolic(j)) continue;
      const double d = arc_gap(G.arcs_[i], G.arcs_[j]);
      if (!(d > 0.0)) {
        throw Error(ErrorKind::ArcsOverlap, "arcs of " + G.letter_name(i) + " and " + G.letter_name(j) +
                                                " overlap (gap " + std::to_string(d) + ")");
      }
      gap = std::min(gap, d);
    }
  }
  G.gap_ = gap;

  const std::vector<cplx> fp = fixed_points(gamma);
  G.p_angle_ = wrap_angle(std::arg(fp.front()));
  const Arc& ag = G.arcs_[2 * G.n_hyp_];
  const Arc& agi = G.arcs_[2 * G.n_hyp_ + 1];
  const double touch = arc_gap(ag, agi);
  if (std::abs(touch) > 1e-9 || !ag.contains(G.p_angle_, 1e-9) || !agi.contains(G.p_angle_, 1e-9)) {
    throw Error(ErrorKind::ArcsOverlap, "parabolic arcs must meet exactly at the fixed point");
  }
  if (std::abs(deriv_mod(gamma, boundary_point(G.p_angle_)) - 1.0) > 1e-9) {
    throw Error(ErrorKind::NotParabolic, "|g'(p)| != 1");
  }

  for (int e = 0; e < nl; ++e) G.hulls_.push_back(compute_hull(G.arcs_, e));

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int h = 0; h < G.num_hyperbolic_letters(); ++h) {
    const CylinderBounds cb = cylinder_bounds(G, Word{Symbol::hyp(h)});
    lo = std::min(lo, cb.log_deriv_inf);
    hi = std::max(hi, cb.log_deriv_sup);
  }
  G.Z_ = std::exp(lo);
  G.W_ = std::exp(hi);
  return G;
}

GeneratorSet example_group(double u, double t, double lambda) {
  if (!(u > 0.0) || !(t > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "example_group needs u > 0, t > 0, lambda > 0");
  }
  using M2 = std::array<cplx, 4>;
  auto mul = [](const M2& x, const M2& y) {
    return M2{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
              x[2] * y[1] + x[3] * y[3]};
  };
  const cplx I(0.0, 1.0);
  const M2 C{1.0, -I, 1.0, I};
  const M2 Cinv{0.5, 0.5, 0.5 * I, -0.5 * I};
  auto to_disc = [&](const M2& A) {
    const M2 D = mul(mul(C, A), Cinv);
    return MobiusMap::from_matrix(D[0], D[1], D[2], D[3]);
  };
  // Hyperbolic fixing ±u with multiplier lambda: S⁻¹ diag(√λ, 1/√λ) S, S(w) = (w - u)/(w + u).
  const double r = std::sqrt(lambda);
  const double k = 1.0 / (2.0 * u);
  const M2 S{1.0, -u, 1.0, u};
  const M2 Sinv{u * k, u * k, -k, k};
  const M2 A = mul(mul(Sinv, M2{r, 0.0, 0.0, 1.0 / r}), S);
  const MobiusMap h = to_disc(A);
  const MobiusMap g = to_disc(M2{1.0, t, 0.0, 1.0});
  GeneratorSet G = validate_generators({{h, h.inverse()}}, {g, g.inverse()});
  std::ostringstream label;
  label << "example(u=" << u << ", t=" << t << ", lambda=" << lambda << ")";
  G.set_label(label.str());
  return G;
}

std::string to_string(const GeneratorSet& G, const Symbol& s) {
  if (s.kind == Symbol::Kind::Hyp) return "Hyp(" + G.letter_name(s.letter) + ")";
  return std::string("Par(") + (s.sign > 0 ? "+" : "-") + "," + std::to_string(s.power) + "," +
         G.letter_name(s.letter) + ")";
}

std::string to_string(const GeneratorSet& G, const Word& w) {
  std::string out;
  for (const Symbol& s : w) {
    if (!out.empty()) out += ' ';
    out += to_string(G, s);
  }
  return out;
}

MobiusMap element(const GeneratorSet& G, const Symbol& s) {
  if (s.kind == Symbol::Kind::Hyp) return G.map(s.letter);
  return G.map(s.letter) * G.parabolic_power(s.sign, static_cast<double>(s.power));
}

MobiusMap element(const GeneratorSet& G, const Word& w) {
  MobiusMap F;
  for (const Symbol& s : w) F = element(G, s) * F;
  return F;
}

std::int64_t a1_sum(const Word& w) noexcept {
  std::int64_t sum = 0;
  for (const Symbol& s : w) sum += s.a1();
  return sum;
}

bool admissible(const Symbol& a, const Symbol& b) noexcept {
  // Par symbols start with a parabolic letter, never the inverse of a
  // hyperbolic terminal letter.
  return !(b.kind == Symbol::Kind::Hyp && b.letter == inverse_letter(a.letter));
}

bool admissible(const Word& w) noexcept {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!admissible(w[i - 1], w[i])) return false;
  }
  return true;
}

SeriesStep bowen_series_step(const GeneratorSet& G, double theta) {
  constexpr double tol = 1e-12;
  // Parabolic letters first so the shared endpoint p resolves to γ.
  const int first = G.num_hyperbolic_letters();
  for (int k = 0; k < G.num_letters(); ++k) {
    const int e = (first + k) % G.num_letters();
    if (G.arc(e).contains(theta, tol)) {
      return {e, wrap_angle(std::arg(apply(G.map(e), boundary_point(theta))))};
    }
  }
  throw Error(ErrorKind::OutsideDomain, "angle " + std::to_string(theta) + " lies in no isometry arc");
}

Word encode(const GeneratorSet& G, double theta, int depth) {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be nonnegative");
  Word w;
  double x = theta;
  while (static_cast<int>(w.size()) < depth) {
    SeriesStep st = bowen_series_step(G, x);
    if (!G.is_parabolic(st.letter)) {
      w.push_back(Symbol::hyp(st.letter));
      x = st.angle;
      continue;
    }
    const int par = st.letter;
    std::int64_t l = 0;
    while (st.letter == par) {
      if (++l > kParabolicRunCap) {
        throw Error(ErrorKind::ParabolicTail, "parabolic run exceeds the iteration cap");
      }
      x = st.angle;
      st = bowen_series_step(G, x);
    }
    if (G.is_parabolic(st.letter)) {
      throw Error(ErrorKind::OutsideDomain, "parabolic run reversed direction");
    }
    w.push_back(Symbol::par(G.parabolic_sign(par), l, st.letter));
    x = st.angle;
  }
  return w;
}

Arc cylinder_arc(const GeneratorSet& G, const Word& w) {
  if (w.empty()) throw Error(ErrorKind::InvalidArgument, "empty word has no cylinder");
  Arc arc = G.hull(w.back().last_letter());
  auto pull = [&](const MobiusMap& g, int letter) {
    const Arc pulled = pullback_arc(g, arc);
    const auto cut = intersect(pulled, G.arc(letter));
    if (!cut) throw Error(ErrorKind::EmptyCylinder, "cylinder of " + to_string(G, w) + " is empty");
    arc = *cut;
  };
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    pull(G.map(it->letter), it->letter);
    if (it->kind == Symbol::Kind::Par) {
      pull(G.parabolic_power(it->sign, static_cast<double>(it->power)), G.parabolic_letter(it->sign));
    }
  }
  return arc;
}

CylinderBounds cylinder_bounds(const GeneratorSet& G, const Word& w) {
  const Arc arc = cylinder_arc(G, w);
  const LogDerivRange r = log_deriv_range(element(G, w), arc);
  return {r.inf, r.sup, a1_sum(w)};
}

DistortionEstimate distortion_estimate(const GeneratorSet& G, int L) {
  if (L < 2) throw Error(ErrorKind::InvalidArgument, "distortion_estimate needs L >= 2");
  double logK = 0.0, logK_half = 0.0;
  for (int l = 1; l <= L; ++l) {
    const double two_log_l = 2.0 * std::log(static_cast<double>(l));
    for (int sign : {1, -1}) {
      const MobiusMap gl = G.parabolic_power(sign, l);
      for (int h = 0; h < G.num_hyperbolic_letters(); ++h) {
        const Arc arc = cylinder_arc(G, Word{Symbol::par(sign, l, h)});
        const LogDerivRange r = log_deriv_range(gl, arc);
        logK = std::max({logK, 0.5 * (r.sup - two_log_l), 0.5 * (two_log_l - r.inf)});
      }
    }
    if (l == L / 2) logK_half = logK;
  }
  const DistortionEstimate est{std::exp(logK), std::exp(logK_half), L};
  if (est.K > 1.05 * est.K_half) {
    throw Error(ErrorKind::Unstable, "distortion constant grows from " + std::to_string(est.K_half) + " to " +
                                         std::to_string(est.K));
  }
  return est;
}

}  // namespace cuspwind
