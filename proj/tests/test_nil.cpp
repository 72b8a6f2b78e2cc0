#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"
#include "gowers/generate.hpp"
#include "gowers/nil.hpp"
#include "gowers/rng.hpp"

using namespace gowers;

namespace {

struct BruteScan {
  double max = 0, mean = 0;
  std::size_t a = 0, b = 0;
  std::vector<double> corr;  // D * a + b
};

// Every (a, b) directly in long double.
BruteScan brute_scan(const Signal& f, std::size_t D) {
  BruteScan r;
  r.corr.resize(D * D);
  const std::size_t M = f.size();
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      std::complex<long double> s = 0;
      for (std::size_t n = 0; n < M; ++n) {
        const long double ph = -2 * 3.14159265358979323846264338327950288L *
                               static_cast<long double>((a * (n * n % D) + b * n) % D) / D;
        s += std::complex<long double>(f.values[n].real(), f.values[n].imag()) *
             std::complex<long double>(std::cos(ph), std::sin(ph));
      }
      const double c = static_cast<double>(std::abs(s) / M);
      r.corr[a * D + b] = c;
      r.mean += c;
      if (c > r.max) {
        r.max = c;
        r.a = a;
        r.b = b;
      }
    }
  r.mean /= static_cast<double>(D * D);
  return r;
}

Signal planted_quadratic(const DomainSpec& dom, std::size_t a, std::size_t b, std::size_t D) {
  std::vector<cplx> v(dom.cardinality());
  for (std::size_t n = 0; n < v.size(); ++n)
    v[n] = expi(static_cast<double>((a * (n * n % D) + b * n) % D) / static_cast<double>(D));
  return Signal(dom, std::move(v));
}

double u3_ratio(const Signal& f) { return uk_norm(f, 3).value / lp_norm(f, 2.0); }

}  // namespace

TEST_CASE("window truncation radius") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    const int K = heisenberg_cut(sigma, 1e-10);
    // Worst case over the fractional offset: the mass outside the K - 1 nearest terms.
    double worst = 0;
    for (double x = 0; x < 1; x += 0.125) {
      double tail = 0;
      for (int k = -400; k <= 400; ++k)
        if (std::abs(k) > K - 1 + (k < 0 ? 1 : 0)) tail += std::exp(-M_PI * (x + k) * (x + k) / (sigma * sigma));
      worst = std::max(worst, tail);
    }
    CHECK(worst < 1e-10);
  }
  CHECK(heisenberg_window_l2(1.0) == doctest::Approx(std::pow(0.5, 0.25)));
}

TEST_CASE("Heisenberg series") {
  HeisenbergSpec s;
  s.n = 4096;
  CHECK(heisenberg_gamma_defect(s, 1, 100) < 1e-12);
  s.sigma = 0.7;
  CHECK(heisenberg_gamma_defect(s, 2, 100) < 1e-12);

  // alpha2 = 0 collapses the series to e(z_n) times a periodized window, and z_n = 0.
  HeisenbergSpec flat;
  flat.alpha2 = 0;
  flat.cf_cap = 1 << 20;
  flat.n = 200;
  const Signal f = heisenberg_nilsequence(flat);
  for (std::size_t n = 0; n < flat.n; ++n) {
    const double x = std::fmod(n * flat.alpha1, 1.0);
    double want = 0;
    for (int k = -20; k <= 20; ++k) want += std::exp(-M_PI * (x + k) * (x + k));
    CHECK(std::abs(f.values[n] - cplx(want)) < 1e-10);
  }

  // Direct orbit oracle for the general case.
  s.sigma = 1;
  s.n = 300;
  const Signal g = heisenberg_nilsequence(s);
  for (std::size_t n = 0; n < s.n; n += 7) {
    const long double x1 = n * static_cast<long double>(s.alpha1), x2 = n * static_cast<long double>(s.alpha2);
    const long double z = static_cast<long double>(n) * (n - 1) / 2 * s.alpha1 * s.alpha2;
    cplx sum = 0;
    for (long k = -static_cast<long>(x1) - 30; k <= -static_cast<long>(x1) + 30; ++k) {
      const double t = static_cast<double>(x1 + k);
      const long double ph = k * x2 - std::floor(k * x2);
      sum += std::exp(-M_PI * t * t) * expi(static_cast<double>(ph));
    }
    sum *= expi(static_cast<double>(z - std::floor(z)));
    CHECK(std::abs(g.values[n] - sum) < 1e-9);
  }

  HeisenbergSpec bad;
  bad.alpha1 = 0.001;
  CHECK_THROWS_AS(heisenberg_nilsequence(bad), UsageError);
  HeisenbergSpec thin;
  thin.k_cut = 1;
  thin.sigma = 3;
  CHECK_THROWS_AS(heisenberg_nilsequence(thin), ComputationError);
}

TEST_CASE("Heisenberg L2 mass approaches the window norm") {
  HeisenbergSpec s;
  const Signal f = heisenberg_nilsequence(s);
  CHECK(std::abs(lp_norm(f, 2.0) - heisenberg_window_l2(1.0)) < 0.02);
}

TEST_CASE("Heisenberg ratio at moderate length") {
  HeisenbergSpec s;
  s.n = 2048;
  const double r = u3_ratio(heisenberg_nilsequence(s));
  MESSAGE("U3/L2 at N=2048: " << r);
  CHECK(std::abs(r - std::pow(2.0, -0.125)) < 0.03);
}

TEST_CASE("continued fractions") {
  const auto g = continued_fraction(0.6180339887498949, 12);
  REQUIRE(g.size() == 12);
  CHECK(g[0] == 0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] == 1);
  const auto r = continued_fraction(0.4142135623730951, 10);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] == 2);
  CHECK(continued_fraction(0.375, 10) == std::vector<int>{0, 2, 1, 2});
}

TEST_CASE("quadratic extension example") {
  const Signal one = quadratic_example(31, 1);
  CHECK(uk_norm(one, 3).value == doctest::Approx(1.0).epsilon(1e-9));
  const Signal f = quadratic_example(61, 3);
  for (std::size_t n = 0; n < 61; ++n)
    CHECK(std::abs(f.values[n] - expi(static_cast<double>(n * n % 183) / 183.0)) < 1e-12);
  const double u3 = uk_norm(f, 3).value;
  MESSAGE("U3(Z/61) of e(n^2/183): " << u3);
  CHECK(u3 >= 0.8);
  CHECK_THROWS_AS(quadratic_example(0, 3), UsageError);
}

TEST_CASE("skew shift orbit") {
  const Signal lin = skew_shift_orbit(0.0, 1.0 / 3, 0.25, 60);
  for (std::size_t n = 0; n < 60; ++n) CHECK(std::abs(lin.values[n] - expi(0.25 + n / 3.0)) < 1e-12);
  // alpha = 2c/D makes y_n = c (n^2 - n) / D.
  const std::size_t D = 64, c = 5;
  const Signal sk = skew_shift_orbit(2.0 * c / D, 0.0, 0.0, 256);
  const auto s = quad_correlation_scan(sk, D);
  CHECK(s.max_corr == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.a == c);
  CHECK(s.b == D - c);
}

TEST_CASE("quadratic scan against a direct oracle") {
  CounterRng rng(3);
  struct Case {
    DomainSpec dom;
    std::size_t D;
  };
  const std::vector<Case> cases = {{DomainSpec::cyclic(12), 12},   {DomainSpec::cyclic(20), 9},
                                   {DomainSpec::cyclic(15), 10},   {DomainSpec::interval(17), 8},
                                   {DomainSpec::interval(30), 7},  {DomainSpec::cyclic(7), 16},
                                   {DomainSpec::interval(40), 1},  {DomainSpec::cyclic(33), 22}};
  for (const auto& cs : cases) {
    std::vector<cplx> v(cs.dom.cardinality());
    for (auto& z : v) z = std::polar(rng.uniform(), kTwoPi * rng.uniform());
    const Signal f(cs.dom, v);
    const auto got = quad_correlation_scan(f, cs.D);
    const auto want = brute_scan(f, cs.D);
    CHECK(got.denominator == cs.D);
    CHECK(got.max_corr == doctest::Approx(want.max).epsilon(1e-12));
    CHECK(want.corr[got.a * cs.D + got.b] == doctest::Approx(want.max).epsilon(1e-12));
    CHECK(got.mean_corr == doctest::Approx(want.mean).epsilon(1e-12));
    std::size_t total = 0;
    for (auto h : got.histogram) total += h;
    CHECK(total == cs.D * cs.D);
    CHECK(got.max_corr <= lp_norm(f, 2.0) * std::sqrt(static_cast<double>(cs.dom.cardinality()) / f.size()) + 1e-9);
  }
}

TEST_CASE("quadratic scan recovers planted phases") {
  const auto s = quad_correlation_scan(planted_quadratic(DomainSpec::cyclic(64), 3, 5, 64), 64);
  CHECK(s.max_corr == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.a == 3);
  CHECK(s.b == 5);
  CounterRng rng(17);
  for (std::size_t D : {5, 16, 27, 100, 256}) {
    const std::size_t a = rng.below(D), b = rng.below(D);
    const auto r = quad_correlation_scan(planted_quadratic(DomainSpec::interval(D), a, b, D), D);
    CHECK(r.max_corr == doctest::Approx(1.0).epsilon(1e-9));
    // a + D/2 repeats a with b shifted by D/2, and the scan reports the smaller.
    const std::size_t wa = D % 2 == 0 && a >= D / 2 ? a - D / 2 : a;
    const std::size_t wb = D % 2 == 0 && a >= D / 2 ? (b + D / 2) % D : b;
    CHECK(r.a == wa);
    CHECK(r.b == wb);
  }
  std::vector<cplx> lin(64);
  for (std::size_t n = 0; n < 64; ++n) lin[n] = expi(n / 64.0);
  const auto l = quad_correlation_scan(Signal(DomainSpec::cyclic(64), lin), 64);
  CHECK(l.a == 0);
  CHECK(l.b == 1);
  CHECK(l.max_corr == doctest::Approx(1.0));
}

TEST_CASE("random signals correlate weakly with quadratic phases") {
  GenParams p;
  p.domain = DomainSpec::cyclic(256);
  const auto s = quad_correlation_scan(generate("random-unimodular", p, 5), 256);
  MESSAGE("random max correlation " << s.max_corr);
  CHECK(s.max_corr <= 0.25);
  Tolerances tight = default_tolerances();
  tight.scan_cap = 100;
  CHECK_THROWS_AS(quad_correlation_scan(generate("random-unimodular", p, 5), 128, tight), ComputationError);
  CHECK_THROWS_AS(quad_correlation_scan(Signal::constant(DomainSpec::group({4, 4}), 1.0), 4), UsageError);
}

TEST_CASE("threshold sweep") {
  std::vector<SweepItem> items(3);
  items[0].construction = "planted";
  items[0].n = 64;
  items[1].construction = "random";
  items[1].n = 64;
  items[2].construction = "quadext";
  items[2].n = 31;
  const auto rows = threshold_sweep(items);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].u3_ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rows[0].max_corr == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rows[1].u3_ratio < 0.8);
  CHECK(rows[2].params == "N=31;D=31;q=3");
  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("construction,params,u3_ratio,max_corr,argmax_a,argmax_b\n", 0) == 0);
  std::istringstream is(csv);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 4);
  CHECK(sweep_csv(threshold_sweep(items)) == csv);
  items[0].construction = "bogus";
  CHECK_THROWS_AS(threshold_sweep(items), UsageError);
}
