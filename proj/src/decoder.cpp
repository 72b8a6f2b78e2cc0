#include "gowers/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gowers/error.hpp"
#include "gowers/fft.hpp"
#include "gowers/parallel.hpp"
#include "internal.hpp"

namespace gowers {

std::string status_name(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::ok: return "ok";
    case DecodeStatus::covering_failure: return "covering_failure";
    case DecodeStatus::cocycle_failure: return "cocycle_failure";
    case DecodeStatus::certification_failure: return "certification_failure";
  }
  return "?";
}

double l1_residual(const Signal& f, cplx c, const PolyPhase& p) {
  if (p.table.size() != f.size()) usage_fail("l1_residual: phase and signal sizes differ");
  std::vector<double> a(f.size());
  for (std::size_t x = 0; x < a.size(); ++x) a[x] = std::abs(f.values[x] - c * expi(p.table[x]));
  return f.domain.point_weight() * simd::active().sum_real(a.data(), a.size());
}

namespace {

void check_bounded(const Signal& f) {
  for (const auto& z : f.values)
    if (std::abs(z) > 1 + 1e-9) usage_fail("decoder input must satisfy ||f||_inf <= 1");
}

PolyPhase zero_phase(const DomainSpec& d) {
  PolyPhase p{d, 0, std::vector<double>(d.cardinality(), 0.0), std::nullopt};
  if (d.is_cyclic() || d.is_interval()) p.coeffs = std::vector<double>{0.0};
  return p;
}

// Circular mean of a table of phases, as a representative in (-1/2, 1/2],
// together with the largest deviation from it.
std::pair<double, double> constant_part(const std::vector<double>& t) {
  cplx s = 0;
  for (double v : t) s += expi(v);
  const double c = wrap_half(std::arg(s) / kTwoPi);
  double dev = 0;
  for (double v : t) dev = std::max(dev, std::abs(wrap_half(v - c)));
  return {c, dev};
}

Signal clamp_unit(const Signal& f, double tau) {
  std::vector<cplx> v(f.values);
  for (auto& z : v) {
    const double a = std::abs(z);
    z = a >= tau ? z / a : cplx(1.0);
  }
  return Signal(f.domain, std::move(v));
}

void merge_levels(std::vector<LevelDiagnostics>& into, const std::vector<LevelDiagnostics>& child) {
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (into.size() <= i + 1) into.push_back(LevelDiagnostics{child[i].k, 0, 0.0, 0.0, 0.0});
    auto& L = into[i + 1];
    const double tot = static_cast<double>(L.decodes + child[i].decodes);
    L.acceptance_fraction = tot > 0 ? (L.acceptance_fraction * L.decodes +
                                       child[i].acceptance_fraction * child[i].decodes) / tot
                                    : 1.0;
    L.decodes += child[i].decodes;
    L.max_cocycle_defect = std::max(L.max_cocycle_defect, child[i].max_cocycle_defect);
    L.max_corrector = std::max(L.max_corrector, child[i].max_corrector);
  }
}

// Rotation by the unit constant nearest the mean; no magnitude precondition.
MeanDecode mean_decode(const Signal& f) {
  const cplx mean = f.domain.point_weight() * simd::active().sum(f.values.data(), f.size());
  MeanDecode m;
  const double a = std::abs(mean);
  m.c = a > 0 ? mean / a : cplx(1.0);
  std::vector<double> r(f.size());
  for (std::size_t x = 0; x < r.size(); ++x) r[x] = std::abs(f.values[x] - m.c);
  m.residual = f.domain.point_weight() * simd::active().sum_real(r.data(), r.size());
  return m;
}

DecodeReport finish_with_phase(const Signal& f, PolyPhase phase, DecodeReport rep) {
  std::vector<cplx> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f.values[x] * expi(-phase.table[x]);
  const MeanDecode m = mean_decode(Signal(f.domain, std::move(v)));
  rep.phase = std::move(phase);
  rep.constant = m.c;
  rep.residual_l1 = l1_residual(f, m.c, rep.phase);
  return rep;
}

DecodeReport failure(const Signal& f, DecodeStatus s, std::string msg, DecodeReport rep) {
  rep.status = s;
  rep.message = std::move(msg);
  rep.phase = zero_phase(f.domain);
  rep.constant = 1.0;
  rep.residual_l1 = l1_residual(f, 1.0, rep.phase);
  return rep;
}

}  // namespace

MeanDecode decode_base_mean(const Signal& f) {
  check_bounded(f);
  return mean_decode(f);
}

DecodeReport decode_base_linear(const Signal& f, const Tolerances& tol) {
  if (!f.domain.is_group()) usage_fail("decode_base_linear needs a finite abelian group");
  const auto F = fft::forward(f.values, f.domain.shape());
  std::size_t best = 0;
  double bv = std::abs(F[0]);
  for (std::size_t xi = 1; xi < F.size(); ++xi) {
    const double v = std::abs(F[xi]);
    if (v > bv * (1 + 1e-12) + 1e-300) {
      best = xi;
      bv = v;
    }
  }
  const auto& d = f.domain;
  const auto& shape = d.shape();
  const auto xc = d.coords(best);
  std::vector<double> table(f.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    const auto c = d.coords(x);
    double s = 0;
    for (std::size_t i = 0; i < shape.size(); ++i)
      s += static_cast<double>((xc[i] * c[i]) % shape[i]) / static_cast<double>(shape[i]);
    table[x] = wrap01(s);
  }
  auto chk = poly_from_table(table, d, 1, tol);
  if (!chk.accepted) throw InternalError("linear phase failed its own polynomial check");
  DecodeReport rep;
  rep.levels.push_back(LevelDiagnostics{2, 1, 1.0, 0.0, 0.0});
  return finish_with_phase(f, std::move(*chk.phase), std::move(rep));
}

DecodeReport decode_group(const Signal& f, int k, const Tolerances& tol) {
  if (!f.domain.is_group()) usage_fail("decode_group needs a finite abelian group");
  if (k < 1) usage_fail("decode_group needs k >= 1");
  check_bounded(f);
  const auto& d = f.domain;
  if (k == 1) {
    DecodeReport rep;
    rep.levels.push_back(LevelDiagnostics{1, 1, 1.0, 0.0, 0.0});
    return finish_with_phase(f, zero_phase(d), std::move(rep));
  }
  if (k == 2) return decode_base_linear(f, tol);

  const std::size_t n = d.cardinality();
  DecodeReport rep;
  rep.levels.push_back(LevelDiagnostics{k, 1, 0.0, 0.0, 0.0});

  // (1) unit-modulus surrogate
  const Signal g = clamp_unit(f, tol.mag_clamp);

  // (2) derivative decodes; P[h] carries the unit constant as a phase offset
  std::vector<std::vector<double>> P(n);
  std::vector<char> in_a(n, 0);
  std::vector<DecodeReport> child(n);
  parallel_for(n, [&](std::size_t h) {
    child[h] = decode_group(mult_derivative(g, h), k - 1, tol);
    const double off = std::arg(child[h].constant) / kTwoPi;
    P[h] = child[h].phase.table;
    for (auto& v : P[h]) v = wrap01(v + off);
    in_a[h] = child[h].ok() && child[h].residual_l1 <= tol.accept_threshold(k);
  });
  std::size_t accepted = 0;
  for (std::size_t h = 0; h < n; ++h) {
    accepted += in_a[h];
    merge_levels(rep.levels, child[h].levels);
  }
  rep.levels[0].acceptance_fraction = static_cast<double>(accepted) / static_cast<double>(n);

  // (3) Q_h = T^a P_{h-a} + P_a with the smallest admissible a
  std::vector<std::vector<double>> Q(n, std::vector<double>(n));
  for (std::size_t h = 0; h < n; ++h) {
    std::size_t a = n;
    for (std::size_t cand = 0; cand < n; ++cand)
      if (in_a[cand] && in_a[d.sub(h, cand)]) {
        a = cand;
        break;
      }
    if (a == n) {
      rep.uncovered = h;
      return failure(f, DecodeStatus::covering_failure,
                     "no a in A with h - a in A for h = " + std::to_string(h), std::move(rep));
    }
    const std::size_t b = d.sub(h, a);
    for (std::size_t x = 0; x < n; ++x) Q[h][x] = wrap01(P[b][d.sub(x, a)] + P[a][x]);
  }

  // (4) constants c_{h,h'} of Q_{h+h'} - T^h Q_{h'} - Q_h, with the constancy gate
  CocycleTable ct;
  ct.c.assign(n * n, 0.0);
  std::vector<double> row_dev(n, 0.0);
  parallel_for(n, [&](std::size_t h) {
    std::vector<double> t(n);
    for (std::size_t h2 = 0; h2 < n; ++h2) {
      const auto& A = Q[d.add(h, h2)];
      const auto& B = Q[h2];
      const auto& C = Q[h];
      for (std::size_t x = 0; x < n; ++x) t[x] = A[x] - B[d.sub(x, h)] - C[x];
      const auto [c, dev] = constant_part(t);
      ct.c[h * n + h2] = c;
      row_dev[h] = std::max(row_dev[h], dev);
    }
  });
  ct.max_deviation = *std::max_element(row_dev.begin(), row_dev.end());
  rep.levels[0].max_cocycle_defect = ct.max_deviation;
  if (ct.max_deviation > tol.cocycle_gate(k))
    return failure(f, DecodeStatus::cocycle_failure,
                   "cocycle defect " + std::to_string(ct.max_deviation) + " exceeds the separation gate",
                   std::move(rep));

  // (5) b(h) = E_{h''} c_{h,h''}
  ct.b.resize(n);
  for (std::size_t h = 0; h < n; ++h)
    ct.b[h] = simd::active().sum_real(ct.c.data() + h * n, n) / static_cast<double>(n);
  for (std::size_t h = 0; h < n; ++h) {
    rep.levels[0].max_corrector = std::max(rep.levels[0].max_corrector, std::abs(ct.b[h]));
    for (std::size_t h2 = 0; h2 < n; ++h2)
      ct.max_coboundary_defect =
          std::max(ct.max_coboundary_defect,
                   std::abs(ct.c[h * n + h2] - (ct.b[h] + ct.b[h2] - ct.b[d.add(h, h2)])));
    for (auto& v : Q[h]) v = wrap01(v + ct.b[h]);
  }

  // (6) phi(x) = Q~_{-x}(0), then certify
  std::vector<double> phi(n);
  for (std::size_t x = 0; x < n; ++x) phi[x] = Q[d.neg(x)][0];
  double cert = 0;
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t x = 0; x < n; ++x)
      cert = std::max(cert, std::abs(wrap_half(Q[h][x] - (phi[d.sub(x, h)] - phi[x]))));
  auto chk = poly_from_table(phi, d, k - 1, tol);
  rep.certification_defect = std::max(cert, chk.defect);
  ct.q = std::move(Q);
  rep.cocycle = std::move(ct);
  if (!chk.accepted || cert > tol.poly)
    return failure(f, DecodeStatus::certification_failure,
                   "integrated phase failed certification (defect " + std::to_string(rep.certification_defect) + ")",
                   std::move(rep));

  // (7)
  return finish_with_phase(f, std::move(*chk.phase), std::move(rep));
}

SeparationResult separation_scan(std::size_t n, int k, const Tolerances& tol) {
  if (n < 1 || n > 12 || k < 1 || k > 3) usage_fail("separation_scan is limited to n <= 12, k <= 3");
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= n;
  if (total > tol.enum_cap) throw ComputationError("separation_scan: enumeration cap exceeded");

  // Coefficients are rationals over D = n^k. Well-definedness on Z/n forces
  // n c_i + sum_{l>=2} binom(n, l) c_{i-1+l} to be an integer, which pins c_i
  // down to n choices once the higher coefficients are fixed.
  const std::int64_t D = static_cast<std::int64_t>(total);
  auto binom = [](std::int64_t a, int b) {
    std::int64_t r = 1;
    for (int j = 0; j < b; ++j) r = r * (a - j) / (j + 1);
    return r;
  };
  auto mod = [](std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; };

  SeparationResult res;
  res.n = n;
  res.k = k;
  res.bound = std::pow(2.0, -k + 0.5);
  res.min_distance = 1e300;
  std::vector<std::int64_t> m(k + 1, 0), num(k + 1, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (int i = 1; i <= k; ++i) {
      m[i] = static_cast<std::int64_t>(r % n);
      r /= n;
    }
    // num[i] / D = c_i, solved from the top coefficient down
    for (int i = k; i >= 1; --i) {
      std::int64_t s = m[i] * D;  // m_i as a fraction over D
      for (int l = 2; i - 1 + l <= k; ++l) s -= binom(static_cast<std::int64_t>(n), l) * num[i - 1 + l];
      if (s % static_cast<std::int64_t>(n) != 0) throw InternalError("separation_scan: non-integral numerator");
      num[i] = mod(s / static_cast<std::int64_t>(n), D);
    }
    ++res.enumerated;
    std::vector<std::int64_t> tab(n);
    bool constant = true;
    for (std::size_t x = 0; x < n; ++x) {
      std::int64_t s = 0;
      for (int i = 1; i <= k; ++i) s = mod(s + mod(binom(static_cast<std::int64_t>(x), i), D) * num[i], D);
      tab[x] = s;
      constant = constant && s == tab[0];
    }
    // periodicity is guaranteed by construction; check it as a guard
    std::int64_t wrap = 0;
    for (int i = 1; i <= k; ++i) wrap = mod(wrap + mod(binom(static_cast<std::int64_t>(n), i), D) * num[i], D);
    if (wrap != 0) throw InternalError("separation_scan: enumerated map is not periodic");
    if (constant) continue;
    cplx s = 0;
    for (auto t : tab) s += expi(static_cast<double>(t) / static_cast<double>(D));
    const double mean = std::abs(s) / static_cast<double>(n);
    const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * mean));
    if (dist < res.min_distance) {
      res.min_distance = dist;
      res.argmin_coeffs.clear();
      for (int i = 1; i <= k; ++i) res.argmin_coeffs.push_back(static_cast<double>(num[i]) / static_cast<double>(D));
    }
  }
  if (res.min_distance == 1e300) res.min_distance = std::sqrt(2.0);  // only constants exist (n = 1)
  return res;
}

}  // namespace gowers
