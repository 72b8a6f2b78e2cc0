#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gowers/domain.hpp"

namespace gowers {

struct Rational {
  std::int64_t num;
  std::int64_t den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// p_k = 2^k / (k+1), reduced.
Rational critical_exponent(int k);

enum class Backend { direct, recursive, fft_u2, grid, interval };
std::string backend_name(Backend b);

struct NormResult {
  int k = 0;
  double value = 0.0;
  Backend backend = Backend::direct;
  double work_count = 0.0;  // arithmetic-operation estimate
  double elapsed = 0.0;     // seconds
  // interval / grid extras
  std::size_t ambient = 0;
  double boundary_fraction = 0.0;
};

NormResult uk_direct(const Signal& f, int k, const Tolerances& tol = default_tolerances());
NormResult uk_recursive(const Signal& f, int k, const Tolerances& tol = default_tolerances());
NormResult u2_fft(const Signal& f, const Tolerances& tol = default_tolerances());

// Interval norm via zero extension into Z/M. ambient = 0 means M = 2^k N + 1.
// route "embedded" evaluates the literal cyclic norm; "linear" uses the exact
// count over Z, which equals it for every M > 2^k N.
enum class IntervalRoute { linear, embedded };
NormResult uk_interval(const Signal& f, int k, std::size_t ambient = 0,
                       IntervalRoute route = IntervalRoute::linear,
                       const Tolerances& tol = default_tolerances());

// Riemann-sum U^k on a grid torus; throws ComputationError when more than
// tol.boundary_mass of the L^1 mass sits in the outer eighth of the box.
NormResult uk_grid(const Signal& f, int k, const Tolerances& tol = default_tolerances());

// Domain-appropriate default backend.
NormResult uk_norm(const Signal& f, int k, const Tolerances& tol = default_tolerances());

// ||f||_{U^k}^{2^k} with the backend's measure weights, before the root.
double uk_power(const Signal& f, int k, const Tolerances& tol = default_tolerances());

// 2^k-linear Gowers correlation; family[i] sits at vertex omega with
// omega_j = bit (j-1) of i.
cplx gowers_inner(std::span<const Signal> family);

struct GhkEstimate {
  int k = 0;
  std::vector<std::size_t> schedule;
  std::vector<double> estimates;
  double final_value = 0.0;
  double convergence_slope = 0.0;  // fitted d(estimate)/d(1/H) over the tail
  bool monotone_tail = false;
};

GhkEstimate ghk_orbit_estimate(const Signal& orbit, int k, std::vector<std::size_t> schedule);

struct BenchRow {
  std::size_t size;
  std::string backend;
  int k;
  double elapsed;
  double work;
  double value;
};
std::vector<BenchRow> bench_backends(std::span<const std::size_t> sizes, int k,
                                     std::uint64_t seed = 1, int repeats = 1);
std::string bench_csv(std::span<const BenchRow> rows);

}  // namespace gowers
