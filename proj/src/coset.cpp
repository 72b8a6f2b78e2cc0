#include "gowers/coset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"

namespace gowers {

namespace {

std::vector<double> nonneg_values(const Signal& s, const char* what) {
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx z = s.values[i];
    if (z.imag() != 0.0 || z.real() < 0.0) usage_fail(std::string(what) + " must be real and nonnegative");
    v[i] = z.real();
  }
  return v;
}

double total(const std::vector<double>& v) { return simd::active().sum_real(v.data(), v.size()); }

}  // namespace

MarkovSplit markov_split(const Signal& f, const Signal& g, double eps) {
  if (!(f.domain == g.domain)) usage_fail("markov_split: f and g live on different domains");
  if (!(eps > 0)) usage_fail("markov_split needs eps > 0");
  const auto F = nonneg_values(f, "markov_split f");
  const auto G = nonneg_values(g, "markov_split g");
  const double intf = total(F), intg = total(G);
  if (intg > eps * intf)
    usage_fail("markov_split: int g / int f = " + std::to_string(intf > 0 ? intg / intf : INFINITY) +
               " exceeds eps = " + std::to_string(eps));
  const double r = std::sqrt(eps);
  MarkovSplit s;
  double onE = 0;
  for (std::size_t x = 0; x < F.size(); ++x) {
    if (G[x] > r * F[x]) {
      s.exceptional.push_back(x);
      onE += F[x];
    } else if (F[x] > 0) {
      s.max_ratio_off = std::max(s.max_ratio_off, G[x] / F[x]);
    }
  }
  s.mass_fraction = intf > 0 ? onE / intf : 0.0;
  const bool first = s.exceptional.empty() ? onE == 0 : onE < r * intf;
  const bool second = s.max_ratio_off <= r;
  s.certified = first && second;
  return s;
}

HolderMatch holder_level_match(const std::vector<Signal>& factors, const std::vector<double>& exponents,
                               double eps) {
  const std::size_t m = factors.size();
  if (m == 0 || exponents.size() != m) usage_fail("holder_level_match: need one exponent per factor");
  double inv = 0;
  for (double p : exponents) {
    if (!(p >= 1)) usage_fail("holder_level_match: exponents must be >= 1");
    inv += 1.0 / p;
  }
  const double p = 1.0 / inv;
  const DomainSpec& d = factors[0].domain;
  const double w = d.point_weight();
  const std::size_t n = d.cardinality();

  HolderMatch hm;
  std::vector<std::vector<double>> Fi(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(factors[i].domain == d)) usage_fail("holder_level_match: factors live on different domains");
    const auto v = nonneg_values(factors[i], "holder factor");
    Fi[i].resize(n);
    for (std::size_t x = 0; x < n; ++x) Fi[i][x] = std::pow(v[x], exponents[i]);
    const double mass = w * total(Fi[i]);
    if (mass <= 0) usage_fail("holder_level_match: factor " + std::to_string(i) + " is identically zero");
    hm.constants.push_back(1.0 / mass);
    for (auto& t : Fi[i]) t /= mass;  // now int F_i = 1
  }

  // prod F_i^{theta_i} <= sum theta_i F_i pointwise (weighted AM-GM), and the
  // gap integrates to the Hölder deficit.
  std::vector<double> A(n, 0.0), gap(n, 0.0), gm(n, 1.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < m; ++i) {
      const double th = p / exponents[i];
      A[x] += th * Fi[i][x];
      gm[x] *= std::pow(Fi[i][x], th);
    }
    gap[x] = std::max(0.0, A[x] - gm[x]);
  }
  const double ratio = w * total(gm);  // (||prod f_i||_p / prod ||f_i||_{p_i})^p
  hm.deficit = std::max(0.0, 1.0 - ratio);
  const double target = 1.0 - std::pow(std::max(0.0, 1.0 - eps), p);
  if (hm.deficit > target + 1e-12)
    usage_fail("holder_level_match: product is not (1-eps)-extremal (deficit " + std::to_string(hm.deficit) +
               ", allowed " + std::to_string(target) + ")");
  const double eff = std::max(target, 1e-300);

  std::vector<cplx> Av(A.begin(), A.end()), Gv(gap.begin(), gap.end());
  hm.split = markov_split(Signal(d, Av), Signal(d, Gv), eff);
  hm.exceptional = hm.split.exceptional;
  std::vector<char> inE(n, 0);
  for (auto x : hm.exceptional) inE[x] = 1;
  hm.mass_on_e.assign(m, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (inE[x]) {
      for (std::size_t i = 0; i < m; ++i) hm.mass_on_e[i] += w * Fi[i][x];
      continue;
    }
    if (A[x] <= 0) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) hm.band = std::max(hm.band, std::abs(Fi[i][x] - Fi[j][x]) / A[x]);
  }
  return hm;
}

SumsetResult sumset_group_test(const std::vector<std::size_t>& K, const DomainSpec& domain) {
  if (!domain.is_group()) usage_fail("sumset_group_test needs a finite abelian group");
  if (K.empty()) usage_fail("sumset_group_test needs a nonempty set");
  const std::size_t n = domain.cardinality();
  std::vector<char> inK(n, 0), inD(n, 0);
  std::size_t distinct = 0;
  for (auto k : K) {
    if (k >= n) usage_fail("sumset_group_test: element outside the group");
    distinct += !inK[k];
    inK[k] = 1;
  }
  for (std::size_t a = 0; a < n; ++a)
    if (inK[a])
      for (std::size_t b = 0; b < n; ++b)
        if (inK[b]) inD[domain.sub(a, b)] = 1;
  SumsetResult r;
  std::vector<std::size_t> D;
  for (std::size_t x = 0; x < n; ++x)
    if (inD[x]) D.push_back(x);
  r.ratio = static_cast<double>(D.size()) / static_cast<double>(distinct);
  if (2 * D.size() >= 3 * distinct) return r;
  for (auto a : D)
    for (auto b : D)
      if (!inD[domain.add(a, b)])
        throw InternalError("K - K has small doubling but is not closed under addition");
  r.subgroup = true;
  r.h0 = std::move(D);
  return r;
}

SubgroupBasis subgroup_basis(const DomainSpec& d, const std::vector<std::size_t>& h) {
  // Greedy invariant-factor style: take an element of maximal order modulo the
  // span so far, then correct it by a span element so its own order matches.
  const std::size_t n = d.cardinality();
  std::vector<char> inS(n, 0);
  std::vector<std::size_t> span{0};
  inS[0] = 1;
  SubgroupBasis B;
  while (span.size() < h.size()) {
    std::size_t best = 0, best_ord = 0;
    for (auto x : h) {
      std::size_t o = 1, y = x;
      while (!inS[y]) {
        y = d.add(y, x);
        ++o;
      }
      if (o > best_ord) {
        best_ord = o;
        best = x;
      }
    }
    if (best_ord <= 1) throw InternalError("subgroup_basis: element list is not a subgroup");
    std::size_t gen = n;
    for (auto s : span) {
      const std::size_t y = d.sub(best, s);
      if (d.order(y) == best_ord) {
        gen = y;
        break;
      }
    }
    if (gen == n) throw InternalError("subgroup_basis: no lift of full order");
    B.generators.push_back(gen);
    B.orders.push_back(best_ord);
    std::vector<std::size_t> next;
    next.reserve(span.size() * best_ord);
    std::size_t mult = 0;
    for (std::size_t j = 0; j < best_ord; ++j) {
      for (auto s : span) next.push_back(d.add(s, mult));
      mult = d.add(mult, gen);
    }
    for (auto v : next) inS[v] = 1;
    span = std::move(next);
  }
  return B;
}

CosetDetection detect_coset(const Signal& f, int k, double eps, const Tolerances& tol) {
  if (!f.domain.is_group()) usage_fail("detect_coset needs a finite abelian group");
  if (k < 1) usage_fail("detect_coset needs k >= 1");
  if (!(eps >= 0 && eps < 1)) usage_fail("detect_coset needs 0 <= eps < 1");
  const auto& d = f.domain;
  const std::size_t n = d.cardinality();
  const double pk = critical_exponent(k).value();
  const double lp = lp_norm(f, pk);
  if (lp > 1 + 1e-9) usage_fail("detect_coset: ||f||_{L^p_k} = " + std::to_string(lp) + " exceeds 1");

  CosetDetection det;
  det.coset.domain = d;
  det.uk = uk_norm(f, k, tol).value;
  if (det.uk < 1 - eps) {
    det.message = "||f||_{U^k} = " + std::to_string(det.uk) + " is below 1 - eps";
    return det;
  }

  double mx = 0;
  for (const auto& z : f.values) mx = std::max(mx, std::abs(z));
  std::vector<char> inH(n, 0);
  std::vector<std::size_t> H;
  for (std::size_t x = 0; x < n; ++x)
    if (std::abs(f.values[x]) >= tol.level_set * mx && mx > 0) {
      inH[x] = 1;
      H.push_back(x);
    }
  det.level_set_size = H.size();
  if (H.empty()) {
    det.message = "empty level set";
    return det;
  }

  std::vector<std::size_t> K;
  const double need = (1 - tol.intersection_cap) * static_cast<double>(H.size());
  for (std::size_t h = 0; h < n; ++h) {
    std::size_t c = 0;
    for (auto x : H) c += inH[d.sub(x, h)];
    if (static_cast<double>(c) >= need) K.push_back(h);
  }
  det.stabilizer_size = K.size();
  const SumsetResult s = sumset_group_test(K, d);
  det.sumset_ratio = s.ratio;
  if (!s.subgroup) {
    det.message = "sumset test failed: |K-K|/|K| = " + std::to_string(s.ratio);
    return det;
  }
  det.coset.elements = s.h0;

  // Heaviest coset; scanning in index order makes the first unseen element
  // the smallest representative.
  std::vector<char> seen(n, 0);
  double best_mass = -1;
  std::size_t best = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    double m = 0;
    for (auto e : s.h0) {
      const std::size_t y = d.add(x, e);
      seen[y] = 1;
      m += std::pow(std::abs(f.values[y]), pk);
    }
    if (m > best_mass * (1 + 1e-12)) {
      best_mass = m;
      best = x;
    }
  }
  det.coset.offset = best;
  det.coset.validate();

  const double muH = static_cast<double>(s.h0.size()) / static_cast<double>(n);
  const double height = std::pow(muH, -1.0 / pk);
  std::vector<char> inC(n, 0);
  for (auto y : det.coset.coset_members()) inC[y] = 1;
  std::vector<cplx> diff(n);
  for (std::size_t x = 0; x < n; ++x) diff[x] = std::abs(f.values[x]) - (inC[x] ? height : 0.0);
  det.magnitude_residual = lp_norm(Signal(d, std::move(diff)), pk);
  det.ok = true;
  return det;
}

CosetReport recover_structured(const Signal& f, int k, double eps, const Tolerances& tol) {
  if (k < 2) usage_fail("recover_structured: degenerate case k=1 excluded");
  CosetReport rep;
  rep.detection = detect_coset(f, k, eps, tol);
  rep.phase.domain = DomainSpec::cyclic(1);
  if (!rep.detection.ok) {
    rep.message = rep.detection.message;
    return rep;
  }
  const auto& d = f.domain;
  const auto& coset = rep.detection.coset;
  rep.basis = subgroup_basis(d, coset.elements);
  std::vector<std::size_t> orders = rep.basis.orders;
  if (orders.empty()) orders.push_back(1);
  const DomainSpec sub = DomainSpec::group(orders);

  // y in prod Z/m_j  ->  x0 + sum y_j g_j
  std::vector<std::size_t> embed(sub.cardinality());
  for (std::size_t y = 0; y < embed.size(); ++y) {
    const auto c = sub.coords(y);
    std::size_t x = coset.offset;
    for (std::size_t j = 0; j < rep.basis.generators.size(); ++j)
      for (std::size_t t = 0; t < c[j]; ++t) x = d.add(x, rep.basis.generators[j]);
    embed[y] = x;
  }

  const double pk = critical_exponent(k).value();
  const double muH = static_cast<double>(coset.elements.size()) / static_cast<double>(d.cardinality());
  std::vector<cplx> g(embed.size());
  double gmax = 0;
  for (std::size_t y = 0; y < g.size(); ++y) {
    g[y] = f.values[embed[y]] * std::pow(muH, 1.0 / pk);
    gmax = std::max(gmax, std::abs(g[y]));
  }
  if (gmax > 1) // noisy magnitudes: the phase is unaffected by a global rescale
    for (auto& z : g) z /= gmax;
  rep.decode = decode_group(Signal(sub, std::move(g)), k, tol);
  if (!rep.decode.ok()) {
    rep.message = "phase decoding on the coset failed: " + rep.decode.message;
    return rep;
  }
  rep.phase = rep.decode.phase;
  rep.c = rep.decode.constant;

  rep.model.assign(d.cardinality(), cplx(0.0));
  const double height = std::pow(muH, -1.0 / pk);
  for (std::size_t y = 0; y < embed.size(); ++y) rep.model[embed[y]] = height * rep.c * expi(rep.phase.table[y]);
  std::vector<cplx> diff(d.cardinality());
  for (std::size_t x = 0; x < diff.size(); ++x) diff[x] = f.values[x] - rep.model[x];
  rep.total_residual = lp_norm(Signal(d, std::move(diff)), pk);
  rep.ok = true;
  return rep;
}

}  // namespace gowers
