#include "gowers/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "gowers/coset.hpp"
#include "gowers/decoder.hpp"
#include "gowers/error.hpp"
#include "gowers/euclid.hpp"
#include "gowers/fft.hpp"
#include "gowers/generate.hpp"
#include "gowers/engine.hpp"
#include "gowers/nil.hpp"

namespace gowers {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail << "FAILED " << what << "; ";
    pass = pass && ok;
  }
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

// The mixed pool of compact-domain signals used by the random checks.
Signal random_signal(const DomainSpec& d, CounterRng& rng) {
  static const char* kinds[] = {"random-gaussian", "random-unimodular", "random-bounded", "sparse"};
  const std::string kind = kinds[rng.below(4)];
  const std::uint64_t s = rng.next_u64();
  if (kind != "sparse") {
    GenParams p;
    p.domain = d;
    return generate(kind, p, s);
  }
  CounterRng r(s, 3);
  std::vector<cplx> v(d.cardinality(), cplx(0.0));
  const double keep = 0.1 + 0.5 * r.uniform();
  for (auto& z : v)
    if (r.uniform() < keep) z = std::polar(r.uniform(), kTwoPi * r.uniform());
  v[r.below(v.size())] = 1.0;
  return Signal(d, std::move(v));
}

const std::vector<DomainSpec>& small_groups() {
  static const std::vector<DomainSpec> g{
      DomainSpec::cyclic(5),          DomainSpec::cyclic(8),          DomainSpec::cyclic(12),
      DomainSpec::cyclic(17),         DomainSpec::cyclic(32),         DomainSpec::group({2, 2, 2, 2}),
      DomainSpec::group({4, 6}),      DomainSpec::group({2, 3, 5}),   DomainSpec::group({3, 9}),
      DomainSpec::group({2, 4, 4}),   DomainSpec::group({2, 2, 2, 2, 2}), DomainSpec::group({5, 6})};
  return g;
}

double default_u2_power(const Signal& f) { return std::pow(u2_fft(f).value, 4); }

// E_h |E_x f(x + h) conj f(x)|^2, written out on Z/N.
double autocorrelation_u2_power(const Signal& f) {
  const std::size_t n = f.size();
  double total = 0;
  for (std::size_t h = 0; h < n; ++h) {
    double re = 0, im = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const cplx a = f.values[(x + h) % n], b = f.values[x];
      re += a.real() * b.real() + a.imag() * b.imag();
      im += a.imag() * b.real() - a.real() * b.imag();
    }
    total += (re * re + im * im) / static_cast<double>(n * n);
  }
  return total / static_cast<double>(n);
}

// --- criteria -------------------------------------------------------------------

void c_plancherel(const AcceptanceContext& ctx, Outcome& o) {
  const auto u2 = ctx.u2_power ? ctx.u2_power : default_u2_power;
  double worst = 0;
  for (std::size_t n : {16, 60, 128, 1024}) {
    CounterRng rng(ctx.seed, 100 + n);
    for (int t = 0; t < 200; ++t) {
      const Signal f = random_signal(DomainSpec::cyclic(n), rng);
      const double fast = std::pow(std::max(u2(f), 0.0), 0.25);
      const double ref = n <= 128 ? uk_direct(f, 2).value : std::pow(autocorrelation_u2_power(f), 0.25);
      worst = std::max(worst, rel_err(fast, ref));
    }
  }
  o.check(worst <= 1e-9, "relative error " + fmt(worst));
  o.detail << "max rel err " << fmt(worst);
}

void c_backends(const AcceptanceContext& ctx, Outcome& o) {
  CounterRng rng(ctx.seed, 200);
  double worst = 0;
  const auto& groups = small_groups();
  for (int t = 0; t < 200; ++t) {
    const DomainSpec& d = groups[t % groups.size()];
    const int k = 1 + t % 4;
    const Signal f = random_signal(d, rng);
    worst = std::max(worst, rel_err(uk_recursive(f, k).value, uk_direct(f, k).value));
  }
  o.check(worst <= 1e-9, "relative error " + fmt(worst));
  o.detail << "max rel err " << fmt(worst);
}

void c_extremisers(const AcceptanceContext& ctx, Outcome& o) {
  CounterRng rng(ctx.seed, 300);
  double worst_group = 0, worst_interval = 0, worst_inv = 0;
  for (const auto& d : small_groups())
    for (int k = 1; k <= 4; ++k) {
      const Signal f = phase_signal(random_poly_phase(d, k - 1, rng));
      worst_group = std::max(worst_group, std::abs(uk_norm(f, k).value - 1.0));
    }
  for (std::size_t n : {1, 7, 40, 129}) {
    for (int k = 1; k <= 4; ++k) {
      const Signal f = phase_signal(random_poly_phase(DomainSpec::interval(n), k - 1, rng));
      worst_interval = std::max(worst_interval, std::abs(uk_interval(f, k).value - 1.0));
    }
  }
  const auto& groups = small_groups();
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + t % 4;
    const DomainSpec d = t % 3 == 2 ? DomainSpec::interval(20 + t % 37) : groups[t % groups.size()];
    const Signal f = random_signal(d, rng);
    Signal g = phase_signal(random_poly_phase(d, k - 1, rng));
    for (std::size_t x = 0; x < g.size(); ++x) g.values[x] *= f.values[x];
    const double a = d.is_interval() ? uk_interval(f, k).value : uk_norm(f, k).value;
    const double b = d.is_interval() ? uk_interval(g, k).value : uk_norm(g, k).value;
    worst_inv = std::max(worst_inv, std::abs(a - b) / std::max(a, lp_norm(f, 2)));
  }
  o.check(worst_group <= 1e-9, "group extremiser " + fmt(worst_group));
  o.check(worst_interval <= 1e-9, "interval extremiser " + fmt(worst_interval));
  o.check(worst_inv <= 1e-9, "phase invariance " + fmt(worst_inv));
  o.detail << "groups " << fmt(worst_group) << ", intervals " << fmt(worst_interval) << ", invariance "
           << fmt(worst_inv);
}

void c_critical(const AcceptanceContext& ctx, Outcome& o) {
  CounterRng rng(ctx.seed, 400);
  const auto& groups = small_groups();
  double worst = -1e300;
  for (int t = 0; t < 1000; ++t) {
    const DomainSpec& d = groups[rng.below(groups.size())];
    const int k = 1 + t % 4;
    Signal f = [&] {
      if (t % 10 != 9) return random_signal(d, rng);
      GenParams p;
      p.domain = d;
      p.k = k;
      p.degree = std::max(k - 1, 0);
      return generate("coset-phase", p, rng.next_u64());
    }();
    const double gap = uk_norm(f, k).value - lp_norm(f, critical_exponent(k).value());
    worst = std::max(worst, gap);
  }
  o.check(worst <= 1e-9, "largest excess " + fmt(worst));
  o.detail << "max U^k - L^p_k = " << fmt(worst);
}

void c_coset(const AcceptanceContext& ctx, Outcome& o) {
  CounterRng rng(ctx.seed, 500);
  double worst_ratio = 0, worst_res = 0;
  std::size_t cases = 0, failures = 0;
  for (std::size_t n : {8, 12, 16, 24}) {
    const DomainSpec G = DomainSpec::cyclic(n);
    for (std::size_t m = 1; m <= n; ++m) {
      if (n % m) continue;
      const std::size_t step = n / m;
      for (std::size_t x0 = 0; x0 < n; ++x0) {
        const PolyPhase P = random_poly_phase(DomainSpec::cyclic(m), 2, rng);
        const cplx c = std::polar(1.0, kTwoPi * rng.uniform());
        std::vector<cplx> v(n, cplx(0.0));
        const double height = std::sqrt(static_cast<double>(n) / static_cast<double>(m));
        for (std::size_t j = 0; j < m; ++j) v[(x0 + j * step) % n] = height * c * expi(P.table[j]);
        const Signal f(G, std::move(v));
        worst_ratio = std::max(worst_ratio, std::abs(uk_norm(f, 3).value / lp_norm(f, 2) - 1.0));
        const CosetReport r = recover_structured(f, 3, 1e-3);
        ++cases;
        if (!r.ok) {
          ++failures;
          if (failures == 1) o.detail << "first failure n=" << n << " |H|=" << m << " x0=" << x0 << ": " << r.message << "; ";
        } else {
          worst_res = std::max(worst_res, r.total_residual);
        }
      }
    }
  }
  o.check(worst_ratio <= 1e-9, "norm ratio " + fmt(worst_ratio));
  o.check(failures == 0, std::to_string(failures) + " recoveries failed");
  o.check(worst_res <= 1e-7, "residual " + fmt(worst_res));
  o.detail << cases << " cosets, |ratio-1| " << fmt(worst_ratio) << ", max residual " << fmt(worst_res);
}

void c_decoder(const AcceptanceContext& ctx, Outcome& o) {
  CounterRng rng(ctx.seed, 600);
  double worst = 0;
  std::size_t bad = 0;
  for (const auto& d : small_groups())
    for (int k = 2; k <= 4; ++k) {
      const cplx c = std::polar(1.0, kTwoPi * rng.uniform());
      const Signal f = phase_signal(random_poly_phase(d, k - 1, rng), c);
      const DecodeReport r = decode_group(f, k);
      if (!r.ok()) ++bad;
      else worst = std::max(worst, r.residual_l1);
    }
  for (int k = 2; k <= 4; ++k)
    for (std::size_t n : {interval_min_length(k), std::size_t{100}, std::size_t{257}}) {
      const cplx c = std::polar(1.0, kTwoPi * rng.uniform());
      const Signal f = phase_signal(random_poly_phase(DomainSpec::interval(n), k - 1, rng), c);
      const DecodeReport r = decode_interval(f, k);
      if (!r.ok()) ++bad;
      else worst = std::max(worst, r.residual_l1);
    }
  o.check(bad == 0, std::to_string(bad) + " exact decodes rejected");
  o.check(worst <= 1e-7, "exact residual " + fmt(worst));

  // Noise curve on Z/27 at k = 3: same phase and perturbation shape per seed.
  std::vector<double> deltas;
  for (int i = 0; i <= 10; ++i) deltas.push_back(0.01 * i);
  bool monotone = true;
  double at05 = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    double prev = -1;
    for (double delta : deltas) {
      GenParams p;
      p.domain = DomainSpec::cyclic(27);
      p.degree = 2;
      p.noise = delta;
      const Signal f = generate("noisy-poly-phase", p, ctx.seed * 1000 + s);
      const DecodeReport r = decode_group(f, 3);
      const double res = r.ok() ? r.residual_l1 : std::numeric_limits<double>::infinity();
      if (res < prev - 1e-12) monotone = false;
      prev = res;
      if (std::abs(delta - 0.05) < 1e-9) at05 = std::max(at05, res);
    }
  }
  o.check(monotone, "noise residuals not monotone");
  o.check(at05 <= 0.25, "residual at 0.05 = " + fmt(at05));
  o.detail << "exact max residual " << fmt(worst) << ", worst residual at delta=0.05: " << fmt(at05);
}

void c_separation(const AcceptanceContext&, Outcome& o) {
  double least = 1e300;
  const double bound = std::pow(2.0, -1.5);
  for (std::size_t n = 2; n <= 10; ++n) {
    const SeparationResult r = separation_scan(n, 2);
    o.check(std::abs(r.bound - bound) < 1e-15, "bound mismatch");
    o.check(r.holds(), "n=" + std::to_string(n) + " distance " + fmt(r.min_distance));
    least = std::min(least, r.min_distance);
  }
  o.detail << "min distance " << fmt(least) << " vs " << fmt(bound);
}

void c_sumset(const AcceptanceContext&, Outcome& o) {
  std::size_t small_doubling = 0;
  for (std::size_t n = 1; n <= 14; ++n) {
    const DomainSpec G = DomainSpec::cyclic(n);
    const std::uint32_t all = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
      std::vector<std::size_t> K;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) K.push_back(i);
      std::uint32_t diff = 0;
      for (auto a : K)
        for (auto b : K) diff |= 1u << ((a + n - b) % n);
      const int dsize = std::popcount(diff);
      if (2 * dsize >= 3 * static_cast<int>(K.size())) continue;
      ++small_doubling;
      bool closed = true;
      for (std::size_t a = 0; a < n && closed; ++a)
        for (std::size_t b = 0; b < n && closed; ++b)
          if ((diff >> a & 1) && (diff >> b & 1) && !(diff >> ((a + b) % n) & 1)) closed = false;
      const SumsetResult r = sumset_group_test(K, G);
      o.check(closed, "K-K not closed for n=" + std::to_string(n));
      o.check(r.subgroup && static_cast<int>(r.h0.size()) == dsize,
              "library rejected n=" + std::to_string(n) + " mask " + std::to_string(mask));
    }
  }
  o.detail << small_doubling << " sets with |K-K| < 1.5|K|, all verified";
}

void c_constants(const AcceptanceContext&, Outcome& o) {
  using boost::multiprecision::cpp_int;
  o.check(sharp_gowers_constant(1) == 1.0L, "C_1 != 1");
  const double c2 = static_cast<double>(sharp_gowers_constant(2)), c4 = static_cast<double>(sharp_gowers_constant(4));
  o.check(std::round(c2 * 1e4) == 9367, "C_2 = " + fmt(c2));
  o.check(std::round(c4 * 1e4) == 9248, "C_4 = " + fmt(c4));
  o.check(std::abs(sharp_gowers_constant(3) - std::pow(2.0L, -0.125L)) < 1e-15L, "C_3 != 2^{-1/8}");
  for (int d = 1; d <= 12; ++d) {
    const ExactInteger det = cube_form_det(d);
    cpp_int expect = 1;
    expect <<= d * (d - 1);
    o.check(det.decimal == expect.str(), "det M_" + std::to_string(d) + " = " + det.decimal);
  }
  long double worst = 0;
  for (int k = 2; k <= 8; ++k)
    worst = std::max(worst, std::abs(sharp_constant_by_recursion(k) - sharp_gowers_constant(k)));
  o.check(worst <= 1e-12L, "recursion gap " + fmt(static_cast<double>(worst)));
  o.detail << "C_2 " << fmt(c2) << ", C_4 " << fmt(c4) << ", recursion gap " << fmt(static_cast<double>(worst));
}

void c_euclid(const AcceptanceContext& ctx, Outcome& o) {
  const SharpnessReport s = verify_sharpness(3, 8.0, 2048);
  o.check(s.error <= 1e-3, "Gaussian ratio error " + fmt(s.error));
  o.check(s.refinement_decreasing, "refinement errors not decreasing");
  const double c3 = static_cast<double>(sharp_gowers_constant(3));
  double worst = 0;
  for (int t = 0; t < 500; ++t) {
    GenParams p;
    p.domain = DomainSpec::grid(1, 8.0, 256);
    const Signal f = generate("random-grid", p, ctx.seed * 7919 + t);
    worst = std::max(worst, grid_ratio(f, 3) / c3);
  }
  o.check(worst <= 1 + 2e-3, "random ratio / C_3 = " + fmt(worst));
  o.detail << "Gaussian error " << fmt(s.error) << " (order " << fmt(s.observed_order) << "), random max ratio/C_3 "
           << fmt(worst);
}

void c_fourier(const AcceptanceContext&, Outcome& o) {
  struct Case {
    const char* name;
    double sigma, modulation;
  };
  double worst = 0;
  for (const Case& c : {Case{"gaussian", 1.0, 0.0}, Case{"modulated", 1.0, 1.5}, Case{"dilated", 0.6, 0.0},
                        Case{"dilated-wide", 1.6, 0.0}}) {
    GenParams p;
    p.domain = DomainSpec::grid(1, 8.0, 2048);
    p.sigma = c.sigma;
    p.modulation = c.modulation;
    const FourierInvariance r = fourier_invariance_check(generate("gaussian-grid", p, 0));
    o.check(r.diff <= 1e-3, std::string(c.name) + " diff " + fmt(r.diff));
    worst = std::max(worst, r.diff);
  }
  o.detail << "max |U3(f) - U3(fhat)| " << fmt(worst);
}

void c_heisenberg(const AcceptanceContext& ctx, Outcome& o) {
  HeisenbergSpec spec;
  spec.n = 65536;
  const Signal f = heisenberg_nilsequence(spec, ctx.tol);
  const double ratio = uk_interval(f, 3).value / lp_norm(f, 2);
  const double target = std::pow(2.0, -0.125);
  const ScanResult scan = quad_correlation_scan(f, spec.n, ctx.tol);
  o.check(std::abs(ratio - target) <= 0.02, "U3/L2 = " + fmt(ratio));
  o.check(scan.max_corr <= 0.1, "max correlation " + fmt(scan.max_corr));
  o.detail << "U3/L2 " << fmt(ratio) << " (target " << fmt(target) << "), max quadratic correlation "
           << fmt(scan.max_corr);
}

void c_extension(const AcceptanceContext& ctx, Outcome& o) {
  double prev = 2;
  for (std::size_t n : {31, 61, 121}) {
    const Signal f = quadratic_example(n, 3);
    const double u3 = uk_norm(f, 3).value;
    const double base = quad_correlation_scan(f, n, ctx.tol).max_corr;
    const double lifted = quad_correlation_scan(lift_to_extension(f, 3), 3 * n, ctx.tol).max_corr;
    o.check(u3 >= 0.9, "N=" + std::to_string(n) + " U3 " + fmt(u3));
    o.check(base < prev, "N=" + std::to_string(n) + " scan max did not decrease");
    o.check(lifted >= 0.9, "N=" + std::to_string(n) + " lifted scan " + fmt(lifted));
    o.detail << "N=" << n << ": U3 " << fmt(u3) << ", scan " << fmt(base) << ", lifted " << fmt(lifted) << "; ";
    prev = base;
  }
}

void c_ghk(const AcceptanceContext&, Outcome& o) {
  const std::size_t n = 128, len = 8 * n;
  for (std::size_t xi : {1, 5, 37}) {
    GenParams p;
    p.domain = DomainSpec::cyclic(n);
    p.frequency = xi;
    const Signal chi = generate("character", p, 0);
    std::vector<cplx> orbit(len);
    for (std::size_t t = 0; t < len; ++t) orbit[t] = chi.values[t % n];
    const Signal s(DomainSpec::interval(len), std::move(orbit));
    for (int k = 2; k <= 3; ++k) {
      std::vector<std::size_t> schedule;
      for (std::size_t h = 8; (std::size_t{1} << k) * h <= len; h *= 2) schedule.push_back(h);
      const GhkEstimate e = ghk_orbit_estimate(s, k, schedule);
      const double exact = uk_norm(chi, k).value;
      o.check(std::abs(e.final_value - exact) <= 0.05,
              "xi=" + std::to_string(xi) + " k=" + std::to_string(k) + " estimate " + fmt(e.final_value));
      o.detail << "xi=" << xi << " k=" << k << ": " << fmt(e.final_value) << " vs " << fmt(exact) << "; ";
    }
  }
}

void c_bench(const AcceptanceContext& ctx, Outcome& o) {
  const std::size_t sizes[] = {32, 64, 128};
  const auto rows = bench_backends(sizes, 3, ctx.seed, 1);
  if (!ctx.csv_dir.empty()) {
    std::ofstream out(std::filesystem::path(ctx.csv_dir) / "bench_k3.csv");
    out << bench_csv(rows);
  }
  double direct = 0, recursive = 0;
  for (const auto& r : rows)
    if (r.size == 128) {
      if (r.backend == "direct") direct = r.elapsed;
      if (r.backend == "recursive") recursive = r.elapsed;
    }
  const double speedup = recursive > 0 ? direct / recursive : 0;
  o.check(speedup >= 10, "speedup " + fmt(speedup));
  o.detail << "N=128 k=3: direct " << fmt(direct) << " s, recursive " << fmt(recursive) << " s, speedup "
           << fmt(speedup);
}

using CriterionFn = void (*)(const AcceptanceContext&, Outcome&);

const std::vector<std::pair<CriterionInfo, CriterionFn>>& table() {
  static const std::vector<std::pair<CriterionInfo, CriterionFn>> t{
      {{1, "engine", "U2 Plancherel identity", 5}, c_plancherel},
      {{2, "engine", "backend equivalence", 60}, c_backends},
      {{3, "engine", "extremiser identities and phase invariance", 30}, c_extremisers},
      {{4, "engine", "critical inequality", 60}, c_critical},
      {{5, "coset", "coset extremisers and exact recovery", 120}, c_coset},
      {{6, "decoder", "decoder round trip and noise curve", 120}, c_decoder},
      {{7, "decoder", "separation bound", 60}, c_separation},
      {{8, "coset", "inverse sumset", 120}, c_sumset},
      {{9, "euclid", "sharp constants", 5}, c_constants},
      {{10, "euclid", "Euclidean sharpness", 120}, c_euclid},
      {{11, "euclid", "U3 Fourier invariance", 30}, c_fourier},
      {{12, "nil", "Heisenberg threshold witness", 300}, c_heisenberg},
      {{13, "nil", "extension example", 300}, c_extension},
      {{14, "nil", "orbit estimator consistency", 60}, c_ghk},
      {{15, "engine", "recursive speedup", 60}, c_bench},
  };
  return t;
}

bool selected(const CriterionInfo& c, const std::string& filter) {
  if (filter.empty() || filter == "all") return true;
  std::istringstream in(filter);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok == c.group) return true;
    if (!tok.empty() && std::all_of(tok.begin(), tok.end(), ::isdigit) && std::stoi(tok) == c.id) return true;
  }
  return false;
}

}  // namespace

double broken_u2_power(const Signal& f) {
  const auto F = fft::forward(f.values, f.domain.shape());
  const double n = static_cast<double>(f.size());
  double s = 0;
  for (const auto& z : F) {
    const double t = z.real() * z.real() - z.imag() * z.imag();
    s += t * t;
  }
  return s / (n * n * n * n);
}

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> v = [] {
    std::vector<CriterionInfo> out;
    for (const auto& [info, fn] : table()) out.push_back(info);
    return out;
  }();
  return v;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceContext& ctx, const std::string& filter,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  bool known = filter.empty() || filter == "all";
  for (const auto& [info, fn] : table()) known = known || selected(info, filter);
  if (!known) usage_fail("selftest filter '" + filter + "' matches no criterion");
  std::vector<CriterionResult> results;
  for (const auto& [info, fn] : table()) {
    if (!selected(info, filter)) continue;
    CriterionResult r{info, false, "", 0.0};
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(ctx, o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.elapsed > info.budget) {
      o.pass = false;
      o.detail << "; over the " << info.budget << " s budget";
    }
    r.pass = o.pass;
    r.detail = o.detail.str();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::string detail = r.detail;
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << " [" << r.info.id << "] " << r.info.group << ": " << r.info.title << " ("
    << fmt(r.elapsed) << " s) " << detail;
  return s.str();
}

}  // namespace gowers
