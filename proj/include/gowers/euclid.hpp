#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gowers/domain.hpp"

namespace gowers {

// 2^{k/2^k} / (k+1)^{(k+1)/2^{k+1}}
long double sharp_gowers_constant(int k);
// (p^{1/p} / p'^{1/p'})^{1/2}
long double beckner_constant(long double p);
// (A_{2k/(k+1)}^2 / A_k)^{k/2^k} C_{k-1}^{1/2}, which should reproduce C_k.
long double sharp_constant_by_recursion(int k);

// Matrix of Q(x, h_1..h_d) = sum_omega |x + omega.h|^2 (index 0 is x).
std::vector<std::vector<std::int64_t>> cube_form_matrix(int d);

struct ExactInteger {
  std::string decimal;
  bool power_of_two = false;
  int log2 = -1;  // exponent when power_of_two
};
// Fraction-free (Bareiss) elimination in arbitrary precision.
ExactInteger cube_form_det(int d);

struct GaussianExact {
  int d = 0;
  long double value = 0;         // ||e^{-pi x^2}||_{U^d(R)}
  long double from_det = 0;      // det(M_d)^{-1/2^{d+1}}
  long double sharp_product = 0; // C_d ||e^{-pi x^2}||_{L^{p_d}}
};
GaussianExact gaussian_uk_exact(int d);

struct SharpnessReport {
  int d = 0;
  double extent = 0;
  std::size_t points = 0;
  double uk = 0, lp = 0, ratio = 0;
  double constant = 0;  // C_d
  double error = 0;     // |ratio - C_d|
  std::vector<std::size_t> refinement_points;
  std::vector<double> refinement_errors;
  bool refinement_decreasing = false;
  double observed_order = 0;  // log2 of the error ratio per halving of the spacing (last pair)
};

// Gaussian e^{-pi x^2} times e(phase_coeffs[0] x + phase_coeffs[1] x^2 + ...).
SharpnessReport verify_sharpness(int d, double extent, std::size_t points,
                                 const std::vector<double>& phase_coeffs = {},
                                 const std::vector<std::size_t>& refinement = {16, 24, 32});

// U^d / L^{p_d} for a grid signal.
double grid_ratio(const Signal& f, int d);

// Continuous Fourier transform sampled on the matched frequency grid
// (spacing 1/(2L), extent m/(4L)); 1-D grids only.
Signal grid_fourier(const Signal& f);

struct FourierInvariance {
  double u3 = 0, u3_hat = 0, diff = 0;
  double nyquist_fraction = 0;
};
FourierInvariance fourier_invariance_check(const Signal& f, const Tolerances& tol = default_tolerances());

}  // namespace gowers
