#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gowers/domain.hpp"

namespace gowers {

struct HeisenbergSpec {
  double alpha1 = 0.6180339887498949;  // (sqrt 5 - 1) / 2
  double alpha2 = 0.4142135623730951;  // sqrt 2 - 1
  double sigma = 1.0;                  // window F0(t) = exp(-pi t^2 / sigma^2)
  int k_cut = 0;                       // 0 picks the radius from the tail bound
  std::size_t n = 65536;
  int cf_cap = 8;                      // bound on continued-fraction partial quotients
  int cf_terms = 12;                   // how many partial quotients are inspected
};

// Radius K with Gaussian tail mass beyond it below `tail`.
int heisenberg_cut(double sigma, double tail);
// Window series e(z) sum_k F0(x1 + k) e(k x2) at an arbitrary point.
cplx heisenberg_eval(double x1, double x2, long double z, double sigma, int k_cut);
Signal heisenberg_nilsequence(const HeisenbergSpec& spec, const Tolerances& tol = default_tolerances());
// Largest change of the series under the lattice moves x1 -> x1 + 1 and
// x2 -> x2 + 1 at `points` pseudo-random points.
double heisenberg_gamma_defect(const HeisenbergSpec& spec, std::uint64_t seed, int points = 100);
// ||F0||_{L^2(R)} = (sigma^2 / 2)^{1/4}
double heisenberg_window_l2(double sigma);
std::vector<int> continued_fraction(double x, int terms);

// f(n) = e(n^2 / (qN)) on Z/N, canonical representatives.
Signal quadratic_example(std::size_t n, std::size_t q);

// f(T^n(x0, y0)) = e(y_n) for the skew shift T(x, y) = (x + alpha, y + x).
Signal skew_shift_orbit(double alpha, double x0, double y0, std::size_t n);

struct ScanResult {
  std::size_t denominator = 0;
  std::size_t a = 0, b = 0;  // argmax of |<f, e((a n^2 + b n)/D)>|
  double max_corr = 0.0;
  double mean_corr = 0.0;
  std::vector<std::size_t> histogram;  // ten bins of width 0.1 over [0, 1]
};

// Correlations over n in [0, length) normalised by 1/length, for every (a, b).
ScanResult quad_correlation_scan(const Signal& f, std::size_t denominator,
                                 const Tolerances& tol = default_tolerances());

struct SweepItem {
  std::string construction;  // planted | heisenberg | random | quadext | skew
  std::size_t n = 256;
  std::size_t denominator = 0;  // 0 means n
  std::size_t q = 3;            // quadext
  double sigma = 1.0;           // heisenberg
  double alpha = 0.6180339887498949;
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::string construction;
  std::string params;
  double u3_ratio = 0;
  double max_corr = 0;
  std::size_t argmax_a = 0, argmax_b = 0;
};

std::vector<SweepRow> threshold_sweep(const std::vector<SweepItem>& items);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace gowers
