#include "gowers/nil.hpp"

#include <cmath>
#include <sstream>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"
#include "gowers/fft.hpp"
#include "gowers/generate.hpp"
#include "gowers/parallel.hpp"
#include "gowers/rng.hpp"

namespace gowers {

namespace {
using LD = long double;
LD frac(LD x) { return x - std::floor(x); }
}  // namespace

int heisenberg_cut(double sigma, double tail) {
  // sum over |t| >= K of exp(-pi t^2/sigma^2) <= 2 exp(-pi K^2/sigma^2) / (1 - exp(-pi (2K+1)/sigma^2))
  for (int K = 1; K < 10000; ++K) {
    const double q = std::exp(-M_PI * (2.0 * K + 1) / (sigma * sigma));
    const double bound = 2 * std::exp(-M_PI * K * K / (sigma * sigma)) / (1 - q);
    if (bound < tail) return K + 1;  // +1 covers x1 in [0, 1)
  }
  throw ComputationError("heisenberg_cut: window too wide");
}

cplx heisenberg_eval(double x1, double x2, long double z, double sigma, int k_cut) {
  cplx s = 0;
  const int k0 = static_cast<int>(std::floor(x1));
  for (int k = -k0 - k_cut; k <= -k0 + k_cut; ++k) {
    const double t = x1 + k;
    s += std::exp(-M_PI * t * t / (sigma * sigma)) * expi(frac(static_cast<LD>(k) * x2));
  }
  return expi(static_cast<double>(frac(z))) * s;
}

std::vector<int> continued_fraction(double x, int terms) {
  std::vector<int> out;
  LD v = x;
  for (int i = 0; i < terms; ++i) {
    const LD a = std::floor(v);
    out.push_back(static_cast<int>(a));
    const LD r = v - a;
    if (r < 1e-12L) break;
    v = 1 / r;
  }
  return out;
}

double heisenberg_window_l2(double sigma) { return std::pow(sigma * sigma / 2, 0.25); }

Signal heisenberg_nilsequence(const HeisenbergSpec& spec, const Tolerances& tol) {
  for (double a : {spec.alpha1, spec.alpha2})
    if (!(a >= 0 && a < 1)) usage_fail("heisenberg: frequencies must lie in [0, 1)");
  if (!(spec.sigma > 0)) usage_fail("heisenberg: sigma must be positive");
  if (spec.n < 1) usage_fail("heisenberg: N must be positive");
  for (double a : {spec.alpha1, spec.alpha2}) {
    if (a == 0) continue;
    const auto cf = continued_fraction(a, spec.cf_terms);
    for (std::size_t i = 1; i < cf.size(); ++i)
      if (cf[i] > spec.cf_cap)
        usage_fail("heisenberg: frequency " + std::to_string(a) + " has partial quotient " +
                   std::to_string(cf[i]) + " above the cap " + std::to_string(spec.cf_cap));
  }
  const int needed = heisenberg_cut(spec.sigma, tol.heisenberg_tail);
  const int K = spec.k_cut > 0 ? spec.k_cut : needed;
  if (K < needed)
    throw ComputationError("heisenberg: K_cut = " + std::to_string(K) + " leaves tail mass above " +
                           std::to_string(tol.heisenberg_tail) + " (need " + std::to_string(needed) + ")");
  const LD a1 = spec.alpha1, a2 = spec.alpha2, a12 = a1 * a2;
  std::vector<cplx> v(spec.n);
  parallel_for(spec.n, [&](std::size_t n) {
    const LD nn = static_cast<LD>(n);
    const LD x1 = nn * a1, x2 = nn * a2;
    // Move x1 into [0, 1) by the lattice element (-n1, 0, 0), which shifts z by -n1 x2.
    const LD n1 = std::floor(x1);
    const LD z = frac(frac(nn * (nn - 1) / 2 * a12) - frac(n1 * x2));
    v[n] = heisenberg_eval(static_cast<double>(x1 - n1), static_cast<double>(frac(x2)), z, spec.sigma, K);
  });
  return Signal(DomainSpec::interval(spec.n), std::move(v));
}

double heisenberg_gamma_defect(const HeisenbergSpec& spec, std::uint64_t seed, int points) {
  CounterRng rng(seed, 0x4e11);
  const int K = spec.k_cut > 0 ? spec.k_cut : heisenberg_cut(spec.sigma, default_tolerances().heisenberg_tail);
  double worst = 0;
  for (int i = 0; i < points; ++i) {
    const double x1 = rng.uniform(), x2 = rng.uniform();
    const LD z = rng.uniform();
    const cplx base = heisenberg_eval(x1, x2, z, spec.sigma, K);
    // (x1, x2, z)(1, 0, 0) = (x1 + 1, x2, z + x2); (x1, x2, z)(0, 1, 0) = (x1, x2 + 1, z)
    worst = std::max(worst, std::abs(heisenberg_eval(x1 + 1, x2, z + x2, spec.sigma, K) - base));
    worst = std::max(worst, std::abs(heisenberg_eval(x1, x2 + 1, z, spec.sigma, K) - base));
    worst = std::max(worst, std::abs(heisenberg_eval(x1 - 1, x2, z - x2, spec.sigma, K) - base));
  }
  return worst;
}

Signal quadratic_example(std::size_t n, std::size_t q) {
  if (n < 1 || q < 1) usage_fail("quadratic_example needs N, q >= 1");
  const std::uint64_t D = static_cast<std::uint64_t>(q) * n;
  std::vector<cplx> v(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint64_t r = (static_cast<unsigned __int128>(x) * x) % D;
    v[x] = expi(static_cast<double>(r) / static_cast<double>(D));
  }
  return Signal(DomainSpec::cyclic(n), std::move(v));
}

Signal skew_shift_orbit(double alpha, double x0, double y0, std::size_t n) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LD ni = static_cast<LD>(i);
    const LD y = frac(static_cast<LD>(y0) + frac(ni * x0) + frac(ni * (ni - 1) / 2 * alpha));
    v[i] = expi(static_cast<double>(y));
  }
  return Signal(DomainSpec::interval(n), std::move(v));
}

ScanResult quad_correlation_scan(const Signal& f, std::size_t D, const Tolerances& tol) {
  if (!(f.domain.is_cyclic() || f.domain.is_interval()))
    usage_fail("quad_correlation_scan needs a cyclic group or an interval");
  if (D < 1) usage_fail("quad_correlation_scan needs a positive denominator");
  if (D > tol.scan_cap)
    throw ComputationError("quad_correlation_scan: denominator " + std::to_string(D) + " exceeds the cap " +
                           std::to_string(tol.scan_cap) + "; use a coarser sweep");
  const std::size_t M = f.size();
  // e(-j/D) table and n^2 mod D
  std::vector<cplx> root(D);
  for (std::size_t j = 0; j < D; ++j) root[j] = expi(-static_cast<double>(j) / static_cast<double>(D));

  struct Best {
    double v = -1;
    std::size_t b = 0;
    double sum = 0;
    std::vector<std::size_t> hist = std::vector<std::size_t>(10, 0);
  };
  // (a + D/2) n^2 = a n^2 + (D/2) n mod D, so for even D the upper half of the
  // a range repeats the lower half with b shifted by D/2.
  const std::size_t rows = D % 2 == 0 ? D / 2 : D;
  std::vector<Best> per(rows);
  const double norm = 1.0 / static_cast<double>(M);
  const std::size_t shape[] = {D};
  parallel_for(rows, [&](std::size_t a) {
    std::vector<cplx> bins(D, cplx(0.0));
    // j = a n^2 mod D, stepped by a (2n + 1) mod D
    std::size_t j = 0, step = a % D, bin = 0;
    const std::size_t two_a = (2 * a) % D;
    for (std::size_t n = 0; n < M; ++n) {
      {
        // written out: std::complex multiplication goes through the Annex G slow path
        const cplx u = f.values[n], w = root[j];
        bins[bin] += cplx(u.real() * w.real() - u.imag() * w.imag(), u.real() * w.imag() + u.imag() * w.real());
      }
      j += step;
      if (j >= D) j -= D;
      step += two_a;
      if (step >= D) step -= D;
      if (++bin == D) bin = 0;
    }
    fft::transform(bins, bins, shape, -1);
    Best& B = per[a];
    for (std::size_t b = 0; b < D; ++b) {
      const double c = std::sqrt(bins[b].real() * bins[b].real() + bins[b].imag() * bins[b].imag()) * norm;
      B.sum += c;
      ++B.hist[std::min<std::size_t>(9, static_cast<std::size_t>(c * 10))];
      if (c > B.v * (1 + 1e-12)) {
        B.v = c;
        B.b = b;
      }
    }
  });
  ScanResult r;
  r.denominator = D;
  r.histogram.assign(10, 0);
  double total = 0;
  for (std::size_t a = 0; a < rows; ++a) {
    if (a == 0 || per[a].v > r.max_corr * (1 + 1e-12)) {
      r.max_corr = per[a].v;
      r.a = a;
      r.b = per[a].b;
    }
    const std::size_t copies = rows == D ? 1 : 2;
    total += static_cast<double>(copies) * per[a].sum;
    for (int i = 0; i < 10; ++i) r.histogram[i] += copies * per[a].hist[i];
  }
  r.mean_corr = total / (static_cast<double>(D) * static_cast<double>(D));
  return r;
}

std::vector<SweepRow> threshold_sweep(const std::vector<SweepItem>& items) {
  std::vector<SweepRow> rows;
  for (const auto& it : items) {
    SweepRow row;
    row.construction = it.construction;
    std::ostringstream ps;
    const std::size_t D = it.denominator ? it.denominator : it.n;
    ps << "N=" << it.n << ";D=" << D;
    Signal f = Signal::constant(DomainSpec::interval(1), 1.0);
    if (it.construction == "planted") {
      CounterRng rng(it.seed, 0x5eed);
      const std::size_t a = rng.below(D), b = rng.below(D);
      std::vector<cplx> v(it.n);
      for (std::size_t n = 0; n < it.n; ++n) {
        const std::uint64_t j = (a * ((static_cast<unsigned __int128>(n) * n) % D) + b * n) % D;
        v[n] = expi(static_cast<double>(j) / static_cast<double>(D));
      }
      f = Signal(DomainSpec::interval(it.n), std::move(v));
      ps << ";seed=" << it.seed;
    } else if (it.construction == "heisenberg") {
      HeisenbergSpec hs;
      hs.n = it.n;
      hs.sigma = it.sigma;
      f = heisenberg_nilsequence(hs);
      ps << ";sigma=" << it.sigma;
    } else if (it.construction == "random") {
      GenParams gp;
      gp.domain = DomainSpec::interval(it.n);
      f = generate("random-unimodular", gp, it.seed);
      ps << ";seed=" << it.seed;
    } else if (it.construction == "quadext") {
      f = quadratic_example(it.n, it.q);
      ps << ";q=" << it.q;
    } else if (it.construction == "skew") {
      f = skew_shift_orbit(it.alpha, 0.0, 0.0, it.n);
      ps << ";alpha=" << it.alpha;
    } else {
      usage_fail("threshold_sweep: unknown construction '" + it.construction + "'");
    }
    row.params = ps.str();
    row.u3_ratio = uk_norm(f, 3).value / lp_norm(f, 2.0);
    const ScanResult s = quad_correlation_scan(f, D);
    row.max_corr = s.max_corr;
    row.argmax_a = s.a;
    row.argmax_b = s.b;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "construction,params,u3_ratio,max_corr,argmax_a,argmax_b\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.construction << ',' << r.params << ',' << r.u3_ratio << ',' << r.max_corr << ',' << r.argmax_a << ','
       << r.argmax_b << '\n';
  return os.str();
}

}  // namespace gowers
