#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"
#include "gowers/euclid.hpp"
#include "gowers/generate.hpp"

using namespace gowers;

namespace {

// Decimal expansion of 2^e by repeated doubling.
std::string pow2_decimal(int e) {
  std::string s = "1";
  for (int i = 0; i < e; ++i) {
    int carry = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
      const int v = (*it - '0') * 2 + carry;
      *it = static_cast<char>('0' + v % 10);
      carry = v / 10;
    }
    if (carry) s.insert(s.begin(), static_cast<char>('0' + carry));
  }
  return s;
}

long double closed_form_constant(int k) {
  return std::pow(2.0L, k / std::ldexp(1.0L, k)) / std::pow(k + 1.0L, (k + 1) / std::ldexp(1.0L, k + 1));
}

Signal gaussian(double extent, std::size_t m, double sigma = 1, double modulation = 0, double chirp = 0) {
  GenParams p;
  p.domain = DomainSpec::grid(1, extent, m);
  p.sigma = sigma;
  p.modulation = modulation;
  p.chirp = chirp;
  return generate("gaussian-grid", p, 0);
}

}  // namespace

TEST_CASE("sharp constants") {
  CHECK(static_cast<double>(sharp_gowers_constant(1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(static_cast<double>(sharp_gowers_constant(3)) == doctest::Approx(std::pow(2.0, -0.125)).epsilon(1e-15));
  CHECK(std::abs(static_cast<double>(sharp_gowers_constant(3)) - 0.9170) < 5e-5);
  CHECK(std::abs(static_cast<double>(sharp_gowers_constant(2)) - 0.9367) < 5e-5);
  CHECK(std::abs(static_cast<double>(sharp_gowers_constant(4)) - 0.9248) < 5e-5);
  for (int k = 1; k <= 10; ++k)
    CHECK(std::abs(sharp_gowers_constant(k) - closed_form_constant(k)) < 1e-16L);
  CHECK_THROWS_AS(sharp_gowers_constant(0), UsageError);
}

TEST_CASE("Beckner constant") {
  CHECK(std::abs(beckner_constant(2.0L) - 1.0L) < 1e-18L);
  CHECK(std::abs(beckner_constant(1.0L + 1e-9L) - 1.0L) < 1e-6L);
  // Direct evaluation from the definition with p' = p / (p - 1).
  for (long double p : {1.2L, 1.5L, 4.0L / 3.0L, 3.0L, 7.5L}) {
    const long double q = p / (p - 1);
    const long double want = std::sqrt(std::pow(p, 1 / p) / std::pow(q, 1 / q));
    CHECK(std::abs(beckner_constant(p) - want) < 1e-17L);
    CHECK(std::abs(beckner_constant(p) - beckner_constant(q)) > 0);  // not self-dual away from 2
  }
  CHECK_THROWS_AS(beckner_constant(1.0L), UsageError);
  CHECK_THROWS_AS(beckner_constant(0.5L), UsageError);
}

TEST_CASE("recursion reproduces the sharp constants") {
  for (int k = 2; k <= 8; ++k) CHECK(std::abs(sharp_constant_by_recursion(k) - sharp_gowers_constant(k)) < 1e-12L);
  CHECK_THROWS_AS(sharp_constant_by_recursion(1), UsageError);
}

TEST_CASE("cube form matrix matches the expanded quadratic form") {
  for (int d = 1; d <= 8; ++d) {
    const auto M = cube_form_matrix(d);
    REQUIRE(M.size() == static_cast<std::size_t>(d + 1));
    // Coefficient of y_i y_j in sum over omega of (sum_i omega_i y_i)^2 with omega_0 = 1.
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        std::int64_t c = 0;
        for (unsigned w = 0; w < (1u << d); ++w) {
          const unsigned om = (w << 1) | 1u;
          c += (om >> i & 1) & (om >> j & 1);
        }
        CHECK(M[i][j] == c);
      }
  }
}

TEST_CASE("cube form determinant is exactly 2^{d(d-1)}") {
  CHECK(cube_form_det(1).decimal == "1");
  CHECK(cube_form_det(3).decimal == "64");
  CHECK(cube_form_det(5).decimal == "1048576");
  for (int d = 1; d <= 12; ++d) {
    const auto r = cube_form_det(d);
    CHECK(r.power_of_two);
    CHECK(r.log2 == d * (d - 1));
    CHECK(r.decimal == pow2_decimal(d * (d - 1)));
  }
  CHECK_THROWS_AS(cube_form_det(13), UsageError);
  CHECK_THROWS_AS(cube_form_det(0), UsageError);
}

TEST_CASE("Gaussian U^d norm in closed form") {
  CHECK(std::abs(gaussian_uk_exact(1).value - 1.0L) < 1e-18L);
  CHECK(std::abs(gaussian_uk_exact(3).value - std::pow(2.0L, -3.0L / 8)) < 1e-18L);
  for (int d = 1; d <= 8; ++d) {
    const auto g = gaussian_uk_exact(d);
    const long double pd = std::ldexp(1.0L, d) / (d + 1);
    const long double lp = std::pow(pd, -1 / (2 * pd));
    CHECK(std::abs(g.value - g.from_det) < 1e-15L);
    CHECK(std::abs(g.value - g.sharp_product) < 1e-12L);
    CHECK(std::abs(g.value / lp - closed_form_constant(d)) < 1e-12L);
  }
}

TEST_CASE("sampled Gaussian approaches the sharp ratio") {
  const auto r3 = verify_sharpness(3, 8, 2048);
  MESSAGE("d=3 ratio " << r3.ratio << " error " << r3.error << " order " << r3.observed_order);
  CHECK(r3.error <= 1e-3);
  CHECK(r3.refinement_decreasing);
  CHECK(r3.observed_order >= 1);
  const auto r2 = verify_sharpness(2, 8, 2048);
  CHECK(std::abs(r2.ratio - 0.9367) <= 1e-3);

  const auto cubic = verify_sharpness(3, 8, 2048, {0, 0, 1});
  MESSAGE("cubic phase margin " << r3.constant - cubic.ratio);
  CHECK(cubic.ratio < r3.constant - 1e-3);
  const auto quad = verify_sharpness(3, 8, 2048, {0.7, 0.3});
  CHECK(std::abs(quad.ratio - quad.constant) <= 1e-3);

  CHECK_THROWS_AS(verify_sharpness(3, 2, 256), ComputationError);
}

TEST_CASE("grid_fourier against the direct transform") {
  const double L = 4;
  const std::size_t m = 64;
  const Signal f = gaussian(L, m, 1, 0.5);
  const Signal F = grid_fourier(f);
  REQUIRE(F.domain.is_grid());
  const auto& g = F.domain.grid_params();
  CHECK(g.points == m);
  CHECK(g.extent == doctest::Approx(m / (4 * L)));
  const double h = 2 * L / m, dxi = 1 / (2 * L);
  double worst = 0, worst_analytic = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double xi = -g.extent + dxi * static_cast<double>(j);
    cplx s = 0;
    for (std::size_t i = 0; i < m; ++i) s += f.values[i] * expi(-(-L + h * static_cast<double>(i)) * xi);
    s *= h;
    worst = std::max(worst, std::abs(F.values[j] - s));
    worst_analytic = std::max(worst_analytic, std::abs(F.values[j] - std::exp(-M_PI * (xi - 0.5) * (xi - 0.5))));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_analytic < 1e-9);
}

TEST_CASE("U3 is invariant under the Fourier transform") {
  const auto self = fourier_invariance_check(gaussian(8, 1024));
  CHECK(self.diff <= 1e-6);
  CHECK(self.u3 == doctest::Approx(std::pow(2.0, -3.0 / 8)).epsilon(1e-3));
  CHECK(fourier_invariance_check(gaussian(8, 1024, 1, 3)).diff <= 1e-3);
  CHECK(fourier_invariance_check(gaussian(8, 1024, 2)).diff <= 1e-3);
  CHECK(fourier_invariance_check(gaussian(8, 1024, 1, 0, 0.4)).diff <= 1e-3);
  // Content at the Nyquist edge is refused.
  CHECK_THROWS_AS(fourier_invariance_check(gaussian(8, 128, 1, 3.9)), ComputationError);
}

TEST_CASE("sharp inequality bounds random grid signals") {
  const double C3 = static_cast<double>(sharp_gowers_constant(3));
  GenParams p;
  p.domain = DomainSpec::grid(1, 8, 256);
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = generate("random-grid", p, s);
    const double r = grid_ratio(f, 3);
    worst = std::max(worst, r / C3);
    CHECK(r <= C3 * (1 + 2e-3));
  }
  MESSAGE("largest ratio / C3 " << worst);
  CHECK(grid_ratio(gaussian(8, 256), 3) == doctest::Approx(C3).epsilon(2e-3));
}
