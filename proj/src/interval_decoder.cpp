// Interval decoder: derivatives only exist on windows [0, N - h), so the
// phases Q_h are kept as integer-argument polynomials (binomial basis, real
// coefficients mod 1) rather than tables, and the cocycle is repaired one
// coefficient at a time from the top degree down.
#include <algorithm>
#include <cmath>

#include "gowers/decoder.hpp"
#include "gowers/error.hpp"
#include "gowers/fft.hpp"
#include "gowers/parallel.hpp"

namespace gowers {

namespace {

using LD = long double;

LD frac(LD x) { return x - std::floor(x); }
LD lift(LD x) {
  LD r = frac(x);
  return r > 0.5L ? r - 1 : r;
}

struct IntPoly {
  std::vector<LD> c;  // P(n) = sum c_i binom(n, i), each c_i in [0, 1)

  explicit IntPoly(std::size_t deg = 0) : c(deg + 1, 0.0L) {}

  LD operator()(LD n) const {
    LD s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += frac(c[i] * binomial(n, static_cast<int>(i)));
    return frac(s);
  }

  // n -> P(n + a), using binom(n + a, i) = sum_j binom(a, i - j) binom(n, j)
  IntPoly shifted(std::size_t a) const {
    IntPoly r(c.size() - 1);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        r.c[j] = frac(r.c[j] + frac(c[i] * binomial(static_cast<LD>(a), static_cast<int>(i - j))));
    return r;
  }

  IntPoly operator-(const IntPoly& o) const {
    IntPoly r(std::max(c.size(), o.c.size()) - 1);
    for (std::size_t i = 0; i < r.c.size(); ++i)
      r.c[i] = frac((i < c.size() ? c[i] : 0) - (i < o.c.size() ? o.c[i] : 0));
    return r;
  }

  // Supremum-style size on [0, W): max_i |lift(c_i)| binom(W, i).
  LD size_on(std::size_t W) const {
    LD m = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      m = std::max(m, std::abs(lift(c[i])) * binomial(static_cast<LD>(W), static_cast<int>(i)));
    return m;
  }
};

void check_bounded(const Signal& f) {
  for (const auto& z : f.values)
    if (std::abs(z) > 1 + 1e-9) usage_fail("decoder input must satisfy ||f||_inf <= 1");
}

PolyPhase to_phase(const DomainSpec& d, const IntPoly& p, int degree) {
  std::vector<double> coeffs(degree + 1, 0.0);
  for (std::size_t i = 0; i < p.c.size() && i < coeffs.size(); ++i) coeffs[i] = static_cast<double>(p.c[i]);
  PolyPhase ph = phase_from_coeffs(d, coeffs);
  // tables from the long double evaluation are more accurate than re-expanding
  for (std::size_t x = 0; x < ph.table.size(); ++x) ph.table[x] = wrap01(static_cast<double>(p(static_cast<LD>(x))));
  return ph;
}

DecodeReport finish(const Signal& f, PolyPhase phase, DecodeReport rep) {
  std::vector<cplx> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f.values[x] * expi(-phase.table[x]);
  const MeanDecode m = decode_base_mean(Signal(f.domain, std::move(v)));
  rep.phase = std::move(phase);
  rep.constant = m.c;
  rep.residual_l1 = l1_residual(f, m.c, rep.phase);
  return rep;
}

DecodeReport fail(const Signal& f, DecodeStatus s, std::string msg, DecodeReport rep) {
  rep.status = s;
  rep.message = std::move(msg);
  rep.phase = phase_from_coeffs(f.domain, {0.0});
  rep.constant = 1.0;
  rep.residual_l1 = l1_residual(f, 1.0, rep.phase);
  return rep;
}

// alpha n + beta: coarse argmax of a zero-padded transform, then two
// refinements from the lag-one autocorrelation of the demodulated signal.
IntPoly linear_fit(const Signal& f) {
  const std::size_t L = f.size();
  IntPoly p(1);
  if (L < 2) return p;
  std::size_t P = 1;
  while (P < 8 * L) P <<= 1;
  std::vector<cplx> buf(P, cplx(0.0));
  std::copy(f.values.begin(), f.values.end(), buf.begin());
  const auto F = fft::forward_1d(buf);
  std::size_t best = 0;
  for (std::size_t i = 1; i < P; ++i)
    if (std::abs(F[i]) > std::abs(F[best]) * (1 + 1e-12)) best = i;
  LD alpha = static_cast<LD>(best) / static_cast<LD>(P);
  for (int it = 0; it < 2; ++it) {
    cplx s = 0;
    for (std::size_t n = 0; n + 1 < L; ++n)
      s += f.values[n + 1] * std::conj(f.values[n]) * expi(-static_cast<double>(frac(alpha)));
    alpha = frac(alpha + std::arg(s) / kTwoPi);
  }
  p.c[1] = alpha;
  return p;
}

std::vector<LevelDiagnostics> merge(std::vector<LevelDiagnostics> into, const std::vector<LevelDiagnostics>& child) {
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (into.size() <= i + 1) into.push_back(LevelDiagnostics{child[i].k, 0, 0.0, 0.0, 0.0});
    auto& L = into[i + 1];
    const double tot = static_cast<double>(L.decodes + child[i].decodes);
    L.acceptance_fraction =
        (L.acceptance_fraction * L.decodes + child[i].acceptance_fraction * child[i].decodes) / tot;
    L.decodes += child[i].decodes;
    L.max_cocycle_defect = std::max(L.max_cocycle_defect, child[i].max_cocycle_defect);
    L.max_corrector = std::max(L.max_corrector, child[i].max_corrector);
  }
  return into;
}

struct Recovered {
  IntPoly poly;
  DecodeReport report;
};

Recovered decode_rec(const Signal& f, int k, const Tolerances& tol);

Recovered decode_linear_interval(const Signal& f) {
  Recovered r{linear_fit(f), {}};
  r.report.levels.push_back(LevelDiagnostics{2, 1, 1.0, 0.0, 0.0});
  r.report = finish(f, to_phase(f.domain, r.poly, 1), std::move(r.report));
  return r;
}

Recovered decode_rec(const Signal& f, int k, const Tolerances& tol) {
  const std::size_t N = f.size();
  if (k == 1) {
    Recovered r{IntPoly(0), {}};
    r.report.levels.push_back(LevelDiagnostics{1, 1, 1.0, 0.0, 0.0});
    r.report = finish(f, to_phase(f.domain, r.poly, 0), std::move(r.report));
    return r;
  }
  if (k == 2) return decode_linear_interval(f);

  DecodeReport rep;
  rep.levels.push_back(LevelDiagnostics{k, 1, 0.0, 0.0, 0.0});
  const std::size_t M = std::max<std::size_t>(static_cast<std::size_t>(k), N / 16);
  const std::size_t W = N - 2 * M;  // every relation below holds on [0, W)

  std::vector<cplx> g(f.values);
  for (auto& z : g) {
    const double a = std::abs(z);
    z = a >= tol.mag_clamp ? z / a : cplx(1.0);
  }

  // Windowed derivatives f(n + h) conj f(n) ~ e(R_h(n)) for 1 <= h <= 2M.
  std::vector<IntPoly> R(2 * M + 1, IntPoly(k - 2));
  std::vector<char> in_a(2 * M + 1, 0);
  std::vector<Recovered> child(2 * M + 1);
  parallel_for(2 * M, [&](std::size_t i) {
    const std::size_t h = i + 1;
    std::vector<cplx> d(N - h);
    for (std::size_t n = 0; n + h < N; ++n) d[n] = g[n + h] * std::conj(g[n]);
    child[h] = decode_rec(Signal(DomainSpec::interval(N - h), std::move(d)), k - 1, tol);
    IntPoly p = child[h].poly;
    p.c.resize(k - 1, 0.0L);
    p.c[0] = frac(p.c[0] + std::arg(child[h].report.constant) / kTwoPi);
    R[h] = p;
    in_a[h] = child[h].report.ok() && child[h].report.residual_l1 <= tol.accept_threshold(k);
  });
  in_a[0] = 1;  // R_0 = 0
  std::size_t accepted = 0;
  for (std::size_t h = 1; h <= 2 * M; ++h) {
    accepted += in_a[h];
    rep.levels = merge(std::move(rep.levels), child[h].report.levels);
  }
  rep.levels[0].acceptance_fraction = static_cast<double>(accepted) / static_cast<double>(2 * M);

  // Q_h(n) = R_a(n) - R_{a-h}(n + h), smallest a >= h with a, a - h admitted.
  std::vector<IntPoly> Q(M + 1, IntPoly(k - 2));
  for (std::size_t h = 1; h <= M; ++h) {
    std::size_t a = 0;
    for (std::size_t cand = h; cand <= 2 * M; ++cand)
      if (in_a[cand] && in_a[cand - h]) {
        a = cand;
        break;
      }
    if (a == 0) {
      rep.uncovered = h;
      Recovered r{IntPoly(k - 1), fail(f, DecodeStatus::covering_failure,
                                       "no admissible decomposition for lag h = " + std::to_string(h), std::move(rep))};
      return r;
    }
    Q[h] = R[a] - R[a - h].shifted(h);
  }

  auto defect = [&](std::size_t h, std::size_t h2) { return Q[h + h2] - Q[h2].shifted(h) - Q[h]; };

  // Localisation gate: every defect polynomial must be small on the window.
  double worst = 0;
  for (std::size_t h = 0; h <= M; ++h)
    for (std::size_t h2 = 0; h + h2 <= M; ++h2) worst = std::max(worst, static_cast<double>(defect(h, h2).size_on(W)));
  rep.levels[0].max_cocycle_defect = worst;
  if (worst > tol.cocycle_gate(k))
    return {IntPoly(k - 1), fail(f, DecodeStatus::cocycle_failure,
                                 "cocycle defect " + std::to_string(worst) + " exceeds the separation gate",
                                 std::move(rep))};

  // Corrector cascade, top coefficient first.
  double max_corr = 0;
  for (int j = k - 2; j >= 0; --j) {
    // averaging pass: a(h) = mean over h'' of the j-th coefficient
    const std::size_t half = M / 2;
    std::vector<LD> avg(M + 1, 0.0L);
    for (std::size_t h = 0; h <= half; ++h) {
      LD s = 0;
      for (std::size_t h2 = 0; h2 <= half; ++h2) s += lift(defect(h, h2).c[j]);
      avg[h] = s / static_cast<LD>(half + 1);
    }
    for (std::size_t h = 0; h <= half; ++h) {
      Q[h].c[j] = frac(Q[h].c[j] + avg[h]);
      max_corr = std::max(max_corr, static_cast<double>(std::abs(avg[h])));
    }
    // telescoping pass: b(h+1) = b(h) + c_{h,1} removes what is left
    std::vector<LD> b(M + 1, 0.0L);
    for (std::size_t h = 1; h <= M; ++h) b[h] = b[h - 1] + lift(defect(h - 1, 1).c[j]);
    for (std::size_t h = 0; h <= M; ++h) {
      Q[h].c[j] = frac(Q[h].c[j] - b[h]);
      max_corr = std::max(max_corr, static_cast<double>(std::abs(b[h])));
    }
  }
  rep.levels[0].max_corrector = max_corr;

  // Integrate: F(h) = Q~_h(0); phi from forward differences of F.
  std::vector<LD> F(k);
  for (int h = 0; h < k; ++h) F[h] = Q[h](0);
  IntPoly phi(k - 1);
  {
    std::vector<LD> diff(F.begin(), F.end());
    for (int i = 0; i < k; ++i) {
      phi.c[i] = frac(diff[0]);
      for (std::size_t x = 0; x + 1 < diff.size(); ++x) diff[x] = lift(diff[x + 1] - diff[x]);
      diff.pop_back();
    }
    phi.c[0] = 0;
  }
  LD cert = 0;
  for (std::size_t h = 0; h <= M; ++h) {
    const IntPoly dphi = phi.shifted(h) - phi;
    cert = std::max(cert, (Q[h] - dphi).size_on(W));
  }
  rep.certification_defect = static_cast<double>(cert);
  if (cert > tol.cocycle_gate(k))
    return {IntPoly(k - 1), fail(f, DecodeStatus::certification_failure,
                                 "integrated phase failed certification (defect " + std::to_string(rep.certification_defect) + ")",
                                 std::move(rep))};
  Recovered out{phi, {}};
  out.report = finish(f, to_phase(f.domain, phi, k - 1), std::move(rep));
  return out;
}

}  // namespace

DecodeReport decode_interval(const Signal& f, int k, const Tolerances& tol) {
  if (!f.domain.is_interval()) usage_fail("decode_interval needs an interval domain");
  if (k < 1) usage_fail("decode_interval needs k >= 1");
  check_bounded(f);
  if (f.size() < interval_min_length(k))
    usage_fail("decode_interval: N = " + std::to_string(f.size()) + " is below N_min(" + std::to_string(k) +
               ") = " + std::to_string(interval_min_length(k)));
  return decode_rec(f, k, tol).report;
}

}  // namespace gowers
