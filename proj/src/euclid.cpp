#include "gowers/euclid.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"
#include "gowers/fft.hpp"

namespace gowers {

long double sharp_gowers_constant(int k) {
  if (k < 1) usage_fail("sharp_gowers_constant needs k >= 1");
  const long double two_k = std::ldexp(1.0L, k);
  return std::pow(2.0L, k / two_k) / std::pow(static_cast<long double>(k + 1), (k + 1) / (2 * two_k));
}

long double beckner_constant(long double p) {
  if (!(p > 1) || std::isinf(p)) usage_fail("beckner_constant needs 1 < p < infinity");
  const long double q = p / (p - 1);
  return std::sqrt(std::pow(p, 1 / p) / std::pow(q, 1 / q));
}

long double sharp_constant_by_recursion(int k) {
  if (k < 2) usage_fail("the recursion starts at k = 2");
  const long double a = beckner_constant(2.0L * k / (k + 1));
  const long double b = beckner_constant(static_cast<long double>(k));
  return std::pow(a * a / b, k / std::ldexp(1.0L, k)) * std::sqrt(sharp_gowers_constant(k - 1));
}

std::vector<std::vector<std::int64_t>> cube_form_matrix(int d) {
  if (d < 1 || d > 60) usage_fail("cube_form_matrix needs 1 <= d <= 60");
  // Coefficient of x^2 counts all 2^d vertices; x h_j and h_j^2 the vertices
  // with omega_j = 1; h_i h_j those with both set.
  std::vector<std::vector<std::int64_t>> M(d + 1, std::vector<std::int64_t>(d + 1));
  const std::int64_t full = std::int64_t{1} << d;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      if (i == 0 && j == 0) M[i][j] = full;
      else if (i == 0 || j == 0 || i == j) M[i][j] = full / 2;
      else M[i][j] = full / 4;
    }
  if (d == 1) M[1][1] = 1;  // single h: vertices {0, 1}
  return M;
}

ExactInteger cube_form_det(int d) {
  if (d < 1 || d > 12) usage_fail("cube_form_det is certified for 1 <= d <= 12");
  using boost::multiprecision::cpp_int;
  const auto M0 = cube_form_matrix(d);
  const int n = d + 1;
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = M0[i][j];
  cpp_int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      int r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return {"0", false, -1};
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  cpp_int det = a[n - 1][n - 1] * sign;
  ExactInteger r;
  r.decimal = det.str();
  if (det > 0 && (det & (det - 1)) == 0) {
    r.power_of_two = true;
    r.log2 = static_cast<int>(boost::multiprecision::msb(det));
  }
  return r;
}

GaussianExact gaussian_uk_exact(int d) {
  if (d < 1 || d > 40) usage_fail("gaussian_uk_exact needs 1 <= d <= 40");
  // ||f||_{U^d}^{2^d} = int e^{-pi Q} = det(M_d)^{-1/2}, det M_d = 2^{d(d-1)}.
  GaussianExact g;
  g.d = d;
  const long double two_d1 = std::ldexp(1.0L, d + 1);
  g.value = std::pow(2.0L, -static_cast<long double>(d) * (d - 1) / two_d1);
  long double log2det = static_cast<long double>(d) * (d - 1);
  if (d <= 12) {
    const auto det = cube_form_det(d);
    if (!det.power_of_two) throw InternalError("cube form determinant is not a power of two");
    log2det = det.log2;
  }
  g.from_det = std::pow(2.0L, -log2det / two_d1);
  const long double pd = std::ldexp(1.0L, d) / (d + 1);
  g.sharp_product = sharp_gowers_constant(d) * std::pow(pd, -(d + 1) / two_d1);
  return g;
}

double grid_ratio(const Signal& f, int d) {
  const double p = critical_exponent(d).value();
  return uk_grid(f, d).value / lp_norm(f, p);
}

namespace {

Signal sampled_gaussian(double extent, std::size_t m, const std::vector<double>& phase) {
  const DomainSpec dom = DomainSpec::grid(1, extent, m);
  std::vector<cplx> v(m);
  const double h = 2 * extent / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = -extent + h * static_cast<double>(j);
    double ph = 0, xp = x;
    for (double c : phase) {
      ph += c * xp;
      xp *= x;
    }
    v[j] = std::exp(-M_PI * x * x) * expi(ph);
  }
  return Signal(dom, std::move(v));
}

}  // namespace

SharpnessReport verify_sharpness(int d, double extent, std::size_t points, const std::vector<double>& phase,
                                 const std::vector<std::size_t>& refinement) {
  if (d < 1) usage_fail("verify_sharpness needs d >= 1");
  const double sigma = 1.0 / std::sqrt(2 * M_PI);
  if (extent < 6 * sigma)
    throw ComputationError("verify_sharpness: extent " + std::to_string(extent) + " gives less than 6 sigma padding");
  SharpnessReport r;
  r.d = d;
  r.extent = extent;
  r.points = points;
  r.constant = static_cast<double>(sharp_gowers_constant(d));
  const Signal f = sampled_gaussian(extent, points, phase);
  r.uk = uk_grid(f, d).value;
  r.lp = lp_norm(f, critical_exponent(d).value());
  r.ratio = r.uk / r.lp;
  r.error = std::abs(r.ratio - r.constant);
  for (auto m : refinement) {
    r.refinement_points.push_back(m);
    r.refinement_errors.push_back(std::abs(grid_ratio(sampled_gaussian(extent, m, phase), d) - r.constant));
  }
  r.refinement_decreasing = r.refinement_errors.size() >= 2;
  for (std::size_t i = 1; i < r.refinement_errors.size(); ++i)
    r.refinement_decreasing = r.refinement_decreasing && r.refinement_errors[i] < r.refinement_errors[i - 1];
  if (r.refinement_errors.size() >= 2) {
    const std::size_t i = r.refinement_errors.size() - 1;
    const double hr = static_cast<double>(r.refinement_points[i]) / static_cast<double>(r.refinement_points[i - 1]);
    r.observed_order = std::log(r.refinement_errors[i - 1] / r.refinement_errors[i]) / std::log(hr);
  }
  return r;
}

Signal grid_fourier(const Signal& f) {
  const auto& g = f.domain.grid_params();
  if (g.dim != 1) usage_fail("grid_fourier handles 1-D grids");
  const std::size_t m = g.points;
  const double L = g.extent, h = 2 * L / static_cast<double>(m);
  const double Lxi = static_cast<double>(m) / (4 * L), dxi = 1 / (2 * L);
  // x_j xi_k = (-L + j h)(-Lxi + k dxi) and h dxi = 1/m; split off the separable parts.
  std::vector<cplx> a(m);
  for (std::size_t j = 0; j < m; ++j) a[j] = f.values[j] * expi(static_cast<double>(j) * h * Lxi);
  auto A = fft::forward_1d(a);
  for (std::size_t k = 0; k < m; ++k) A[k] *= h * expi(-L * Lxi) * expi(L * static_cast<double>(k) * dxi);
  return Signal(DomainSpec::grid(1, Lxi, m), std::move(A));
}

FourierInvariance fourier_invariance_check(const Signal& f, const Tolerances& tol) {
  const Signal fh = grid_fourier(f);
  const auto& g = fh.domain.grid_params();
  const std::size_t m = g.points;
  double tot = 0, edge = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double a = std::norm(fh.values[k]);
    tot += a;
    const double xi = -g.extent + 2 * g.extent * static_cast<double>(k) / static_cast<double>(m);
    if (std::abs(xi) >= 0.875 * g.extent) edge += a;
  }
  FourierInvariance r;
  r.nyquist_fraction = tot > 0 ? edge / tot : 0.0;
  if (r.nyquist_fraction > tol.nyquist_mass)
    throw ComputationError("fourier_invariance_check: spectral mass near Nyquist is " +
                           std::to_string(r.nyquist_fraction) + "; the grid aliases this signal");
  r.u3 = uk_grid(f, 3, tol).value;
  r.u3_hat = uk_grid(fh, 3, tol).value;
  r.diff = std::abs(r.u3 - r.u3_hat);
  return r;
}

}  // namespace gowers
