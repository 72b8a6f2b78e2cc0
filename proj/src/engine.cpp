#include "gowers/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gowers/error.hpp"
#include "gowers/fft.hpp"
#include "gowers/parallel.hpp"
#include "gowers/rng.hpp"
#include "internal.hpp"

namespace gowers {

Rational critical_exponent(int k) {
  if (k < 1) usage_fail("critical_exponent needs k >= 1");
  if (k > 60) usage_fail("critical_exponent: k too large for exact 64-bit arithmetic");
  std::int64_t num = std::int64_t{1} << k, den = k + 1;
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::direct: return "direct";
    case Backend::recursive: return "recursive";
    case Backend::fft_u2: return "fft_u2";
    case Backend::grid: return "grid";
    case Backend::interval: return "interval";
  }
  return "?";
}

namespace {

using detail::shift_into;

void check_k(int k) {
  if (k < 1) usage_fail("U^k needs k >= 1");
  if (k > 20) usage_fail("U^k: k is unreasonably large");
}

// Turns a 2^k-th power sum into the norm after the rounding checks.
double finish(double power, double scale, int k, const Tolerances& tol) {
  if (power < 0) {
    if (power < -tol.negative_clamp * std::max(scale, 1e-300))
      throw InternalError("U^k power sum is negative beyond rounding: " + std::to_string(power));
    power = 0;
  }
  return std::pow(power, std::ldexp(1.0, -k));
}

// sup|f|^{2^k} * mu(domain)^{k+1}: a bound for every power sum computed here.
double power_scale(const Signal& f, int k) {
  double m = 0;
  for (const auto& z : f.values) m = std::max(m, std::abs(z));
  const double mu = f.domain.point_weight() * static_cast<double>(f.size());
  return std::pow(m, std::ldexp(1.0, k)) * std::pow(mu, k + 1);
}

double u2_power_raw(const DomainSpec& d, std::span<const cplx> v) {
  const auto F = fft::forward(v, d.shape());
  const double w = d.point_weight();
  return w * w * w / static_cast<double>(v.size()) * simd::active().sum_abs4(F.data(), F.size());
}

// ||v||^{2^k} for a periodic array on d, by the derivative recursion.
double power_rec(const DomainSpec& d, std::span<const cplx> v, int k) {
  const auto& K = simd::active();
  const double w = d.point_weight();
  if (k == 1) return std::norm(w * K.sum(v.data(), v.size()));
  if (k == 2) return u2_power_raw(d, v);
  const std::size_t n = v.size();
  std::vector<double> acc(n);
  parallel_for(n, [&](std::size_t h) {
    std::vector<cplx> t(n);
    shift_into(d, v.data(), t.data(), h);
    K.mul_conj(t.data(), v.data(), t.data(), n);
    acc[h] = power_rec(d, t, k - 1);
  });
  return w * K.sum_real(acc.data(), n);
}

double log2d(double x) { return x > 1 ? std::log2(x) : 1.0; }

// Sum over h_j..h_k and x of the remaining vertex product, given A_{j-1}.
cplx direct_levels(const std::uint32_t* addt, std::size_t n, const std::vector<cplx>& a, int levels) {
  const auto& K = simd::active();
  if (levels == 0) return K.sum(a.data(), n);
  std::vector<cplx> sums(n), b(n);
  for (std::size_t h = 0; h < n; ++h) {
    const std::uint32_t* row = addt + h * n;
    for (std::size_t x = 0; x < n; ++x) b[x] = a[row[x]];
    K.mul_conj(a.data(), b.data(), b.data(), n);
    sums[h] = direct_levels(addt, n, b, levels - 1);
  }
  return K.sum(sums.data(), n);
}

}  // namespace

double uk_power(const Signal& f, int k, const Tolerances& tol) {
  check_k(k);
  if (f.domain.is_interval()) {
    const double v = uk_interval(f, k, 0, IntervalRoute::linear, tol).value;
    return std::pow(v, std::ldexp(1.0, k));
  }
  return power_rec(f.domain, f.values, k);
}

NormResult uk_direct(const Signal& f, int k, const Tolerances& tol) {
  check_k(k);
  if (!f.domain.is_group()) usage_fail("uk_direct needs a finite abelian group domain");
  detail::Stopwatch sw;
  const auto& d = f.domain;
  const std::size_t n = d.cardinality();
  const double work = std::pow(static_cast<double>(n), k + 1);
  if (work > tol.direct_work_cap)
    throw ComputationError("uk_direct: |G|^(k+1) = " + std::to_string(work) +
                           " exceeds the work cap; use the recursive backend");
  const std::size_t verts = std::size_t{1} << k;
  cplx total;
  if (k == 1) {
    total = std::norm(simd::active().sum(f.values.data(), n));
  } else {
    // Addition table, then the 2^k-fold sum with the vertex product built one
    // coordinate at a time: A_j(x) = A_{j-1}(x) conj A_{j-1}(x + h_j).
    std::vector<std::uint32_t> addt(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t x = 0; x < n; ++x) addt[a * n + x] = static_cast<std::uint32_t>(d.add(x, a));
    std::vector<cplx> outer(n);
    parallel_for(n, [&](std::size_t h1) {
      std::vector<cplx> first(n);
      for (std::size_t x = 0; x < n; ++x) first[x] = f.values[x] * std::conj(f.values[addt[h1 * n + x]]);
      outer[h1] = direct_levels(addt.data(), n, first, k - 1);
    });
    total = simd::active().sum(outer.data(), n);
  }
  total *= std::pow(d.point_weight(), k + 1);
  const double scale = power_scale(f, k);
  if (std::abs(total.imag()) > 1e-12 * std::max(scale, 1e-300) + 1e-15)
    throw InternalError("uk_direct: imaginary part " + std::to_string(total.imag()) + " beyond rounding");
  NormResult r;
  r.k = k;
  r.value = finish(total.real(), scale, k, tol);
  r.backend = Backend::direct;
  r.work_count = work * static_cast<double>(verts);
  r.elapsed = sw.seconds();
  return r;
}

NormResult uk_recursive(const Signal& f, int k, const Tolerances& tol) {
  check_k(k);
  if (!f.domain.is_group()) usage_fail("uk_recursive needs a finite abelian group domain");
  detail::Stopwatch sw;
  const double n = static_cast<double>(f.size());
  NormResult r;
  r.k = k;
  r.value = finish(power_rec(f.domain, f.values, k), power_scale(f, k), k, tol);
  r.backend = Backend::recursive;
  r.work_count = std::pow(n, std::max(0, k - 2)) * (5.0 * n * log2d(n) + 4.0 * n);
  r.elapsed = sw.seconds();
  return r;
}

NormResult u2_fft(const Signal& f, const Tolerances& tol) {
  if (!f.domain.is_group()) usage_fail("u2_fft needs a finite abelian group domain");
  detail::Stopwatch sw;
  const double n = static_cast<double>(f.size());
  NormResult r;
  r.k = 2;
  r.value = finish(u2_power_raw(f.domain, f.values), power_scale(f, 2), 2, tol);
  r.backend = Backend::fft_u2;
  r.work_count = 5.0 * n * log2d(n) + 2.0 * n;
  r.elapsed = sw.seconds();
  return r;
}

// --- intervals ----------------------------------------------------------------

namespace {

// Number of solutions count_k(g) = sum over x, h in Z of the 2^k-fold product,
// for g supported on [0, L). Exact for any ambient modulus above 2^k L.
double count_linear(std::span<const cplx> g, int k) {
  const auto& K = simd::active();
  const std::size_t L = g.size();
  if (L == 0) return 0.0;
  if (k == 1) return std::norm(K.sum(g.data(), L));
  if (k == 2) {
    const std::size_t M = fft::good_size(2 * L - 1);
    std::vector<cplx> buf(M, cplx(0.0));
    std::copy(g.begin(), g.end(), buf.begin());
    const std::size_t shape[] = {M};
    fft::transform(buf, buf, shape, -1);
    return K.sum_abs4(buf.data(), M) / static_cast<double>(M);
  }
  // h = 0 term plus twice the h > 0 terms (h and -h give conjugate products).
  std::vector<double> acc(L);
  parallel_for(L, [&](std::size_t h) {
    std::vector<cplx> d(L - h);
    K.mul_conj(g.data() + h, g.data(), d.data(), L - h);
    acc[h] = (h == 0 ? 1.0 : 2.0) * count_linear(d, k - 1);
  });
  return K.sum_real(acc.data(), L);
}

// count_k(1_[L]) for the indicator, by the same recursion in closed form.
long double count_indicator(std::size_t L, int k) {
  std::vector<long double> c(L + 1);
  for (std::size_t j = 0; j <= L; ++j) c[j] = static_cast<long double>(j) * j;
  for (int level = 2; level <= k; ++level) {
    std::vector<long double> nc(L + 1);
    long double prefix = 0;  // sum_{j < i} c[j]
    for (std::size_t i = 0; i <= L; ++i) {
      nc[i] = c[i] + 2 * prefix;
      prefix += c[i];
    }
    c.swap(nc);
  }
  return c[L];
}

}  // namespace

NormResult uk_interval(const Signal& f, int k, std::size_t ambient, IntervalRoute route,
                       const Tolerances& tol) {
  check_k(k);
  if (!f.domain.is_interval()) usage_fail("uk_interval needs an interval domain");
  detail::Stopwatch sw;
  const std::size_t N = f.size();
  const std::size_t minimal = (std::size_t{1} << k) * N + 1;
  if (ambient == 0) ambient = minimal;
  if (ambient < minimal)
    usage_fail("uk_interval: ambient modulus must exceed 2^k N (got " + std::to_string(ambient) + ")");
  NormResult r;
  r.k = k;
  r.backend = Backend::interval;
  r.ambient = ambient;
  double m = 0;
  for (const auto& z : f.values) m = std::max(m, std::abs(z));
  const double scale = std::pow(m, std::ldexp(1.0, k));
  if (route == IntervalRoute::linear) {
    const long double num = count_linear(f.values, k);
    const long double den = count_indicator(N, k);
    r.value = finish(static_cast<double>(num / den), scale, k, tol);
    const double n = static_cast<double>(N);
    r.work_count = std::pow(n, std::max(0, k - 2)) * (10.0 * n * log2d(2 * n) + 4.0 * n);
  } else {
    const Signal e = embed_interval(f, ambient);
    const Signal one = embed_interval(Signal::constant(f.domain, 1.0), ambient);
    const double num = power_rec(e.domain, e.values, k);
    const double den = power_rec(one.domain, one.values, k);
    r.value = finish(num / den, scale, k, tol);
    const double a = static_cast<double>(ambient);
    r.work_count = 2 * std::pow(a, std::max(0, k - 2)) * (5.0 * a * log2d(a) + 4.0 * a);
  }
  r.elapsed = sw.seconds();
  return r;
}

// --- grids --------------------------------------------------------------------

NormResult uk_grid(const Signal& f, int k, const Tolerances& tol) {
  check_k(k);
  if (!f.domain.is_grid()) usage_fail("uk_grid needs a Euclidean grid domain");
  detail::Stopwatch sw;
  const auto& g = f.domain.grid_params();
  const auto& shape = f.domain.shape();
  // Mass in the outer eighth of the box is what wraps around first.
  double total = 0, outer = 0;
  const double cut = 0.875 * g.extent, step = 2.0 * g.extent / static_cast<double>(g.points);
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double a = std::abs(f.values[x]);
    total += a;
    const auto c = f.domain.coords(x);
    bool edge = false;
    for (std::size_t i = 0; i < shape.size(); ++i)
      if (std::abs(-g.extent + step * static_cast<double>(c[i])) >= cut) edge = true;
    if (edge) outer += a;
  }
  NormResult r;
  r.k = k;
  r.backend = Backend::grid;
  r.boundary_fraction = total > 0 ? outer / total : 0.0;
  if (r.boundary_fraction > tol.boundary_mass)
    throw ComputationError("uk_grid: " + std::to_string(r.boundary_fraction) +
                           " of the mass lies near the box edge; pad the signal so wraparound stays negligible");
  r.value = finish(power_rec(f.domain, f.values, k), power_scale(f, k), k, tol);
  const double n = static_cast<double>(f.size());
  r.work_count = std::pow(n, std::max(0, k - 2)) * (5.0 * n * log2d(n) + 4.0 * n);
  r.elapsed = sw.seconds();
  return r;
}

NormResult uk_norm(const Signal& f, int k, const Tolerances& tol) {
  if (f.domain.is_interval()) return uk_interval(f, k, 0, IntervalRoute::linear, tol);
  if (f.domain.is_grid()) return uk_grid(f, k, tol);
  if (k == 2) return u2_fft(f, tol);
  if (k == 1) return uk_direct(f, k, tol);
  return uk_recursive(f, k, tol);
}

// --- Gowers inner product -------------------------------------------------------

namespace {

cplx inner_rec(const DomainSpec& d, const std::vector<std::vector<cplx>>& fam) {
  const auto& K = simd::active();
  const double w = d.point_weight();
  const std::size_t n = d.cardinality();
  if (fam.size() == 2) return (w * K.sum(fam[0].data(), n)) * std::conj(w * K.sum(fam[1].data(), n));
  const std::size_t half = fam.size() / 2;
  std::vector<cplx> acc(n);
  parallel_for(n, [&](std::size_t h) {
    std::vector<std::vector<cplx>> next(half, std::vector<cplx>(n));
    std::vector<cplx> t(n);
    const std::size_t back = d.neg(h);
    for (std::size_t i = 0; i < half; ++i) {
      shift_into(d, fam[i + half].data(), t.data(), back);  // f(y + h)
      K.mul_conj(fam[i].data(), t.data(), next[i].data(), n);
    }
    acc[h] = inner_rec(d, next);
  });
  return w * K.sum(acc.data(), n);
}

}  // namespace

cplx gowers_inner(std::span<const Signal> family) {
  const std::size_t m = family.size();
  if (m < 2 || (m & (m - 1)) != 0) usage_fail("gowers_inner needs a family of 2^k signals with k >= 1");
  const DomainSpec& d = family[0].domain;
  if (d.is_interval()) usage_fail("gowers_inner needs a periodic (group or grid) domain");
  std::vector<std::vector<cplx>> fam;
  for (const auto& s : family) {
    if (!(s.domain == d)) usage_fail("gowers_inner: signals live on different domains");
    fam.push_back(s.values);
  }
  return inner_rec(d, fam);
}

// --- Gowers-Host-Kra orbit averages --------------------------------------------

namespace {

double ghk_rec(std::span<const cplx> s, int k, std::size_t H) {
  const auto& K = simd::active();
  if (s.empty()) return 0.0;
  if (k == 1) return std::abs(K.sum(s.data(), s.size())) / static_cast<double>(s.size());
  std::vector<double> acc(H);
  parallel_for(H, [&](std::size_t h) {
    const std::size_t len = s.size() - h;
    std::vector<cplx> d(len);
    K.mul_conj(s.data() + h, s.data(), d.data(), len);
    acc[h] = std::pow(ghk_rec(d, k - 1, H), std::ldexp(1.0, k - 1));
  });
  const double mean = K.sum_real(acc.data(), H) / static_cast<double>(H);
  return std::pow(std::max(mean, 0.0), std::ldexp(1.0, -k));
}

}  // namespace

GhkEstimate ghk_orbit_estimate(const Signal& orbit, int k, std::vector<std::size_t> schedule) {
  check_k(k);
  if (!orbit.domain.is_interval()) usage_fail("ghk_orbit_estimate takes orbit samples on an interval");
  const std::size_t L = orbit.size();
  GhkEstimate est;
  est.k = k;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::size_t H = schedule[i];
    if (H == 0) usage_fail("ghk_orbit_estimate: truncations must be positive");
    if (i && H <= schedule[i - 1]) usage_fail("ghk_orbit_estimate: schedule must be increasing");
    if (H > L || (std::size_t{1} << k) * H > L)
      usage_fail("ghk_orbit_estimate: truncation " + std::to_string(H) + " exceeds L/2^k for L = " +
                 std::to_string(L));
  }
  est.schedule = schedule;
  for (auto H : schedule) est.estimates.push_back(ghk_rec(orbit.values, k, H));
  if (!est.estimates.empty()) est.final_value = est.estimates.back();
  // Least-squares slope of estimate against 1/H over the second half of the schedule.
  const std::size_t m = est.estimates.size();
  const std::size_t from = m >= 4 ? m / 2 : 0;
  if (m - from >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(m - from);
    for (std::size_t i = from; i < m; ++i) {
      const double x = 1.0 / static_cast<double>(schedule[i]), y = est.estimates[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double den = cnt * sxx - sx * sx;
    est.convergence_slope = den != 0 ? (cnt * sxy - sx * sy) / den : 0.0;
  }
  bool up = true, down = true;
  for (std::size_t i = from + 1; i < m; ++i) {
    up = up && est.estimates[i] >= est.estimates[i - 1] - 1e-12;
    down = down && est.estimates[i] <= est.estimates[i - 1] + 1e-12;
  }
  est.monotone_tail = m >= 2 && (up || down);
  return est;
}

// --- benchmarks -------------------------------------------------------------------

std::vector<BenchRow> bench_backends(std::span<const std::size_t> sizes, int k, std::uint64_t seed,
                                     int repeats) {
  check_k(k);
  std::vector<BenchRow> rows;
  for (auto n : sizes) {
    CounterRng rng(seed, n);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
    const Signal f(DomainSpec::cyclic(n), std::move(v));
    auto run = [&](const char* name, auto&& fn) {
      BenchRow best{n, name, k, 1e300, 0, 0};
      for (int r = 0; r < std::max(1, repeats); ++r) {
        const NormResult res = fn();
        if (res.elapsed < best.elapsed) best.elapsed = res.elapsed;
        best.work = res.work_count;
        best.value = res.value;
      }
      rows.push_back(best);
    };
    if (std::pow(static_cast<double>(n), k + 1) <= default_tolerances().direct_work_cap)
      run("direct", [&] { return uk_direct(f, k); });
    if (k == 2) run("fft_u2", [&] { return u2_fft(f); });
    run("recursive", [&] { return uk_recursive(f, k); });
  }
  return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
  std::ostringstream os;
  os << "size,backend,k,elapsed_s,work\n";
  os.precision(9);
  for (const auto& r : rows) os << r.size << ',' << r.backend << ',' << r.k << ',' << r.elapsed << ',' << r.work << '\n';
  return os.str();
}

}  // namespace gowers
