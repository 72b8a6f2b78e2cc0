#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gowers/domain.hpp"

namespace gowers {

enum class DecodeStatus { ok, covering_failure, cocycle_failure, certification_failure };
std::string status_name(DecodeStatus s);

struct LevelDiagnostics {
  int k = 0;
  std::size_t decodes = 0;           // decoder calls at this level
  double acceptance_fraction = 1.0;  // mean |A| / #lags over those calls
  double max_cocycle_defect = 0.0;   // largest deviation from constancy seen
  double max_corrector = 0.0;        // largest |b(h)|
};

// Corrected derivative phases of the top level of decode_group.
struct CocycleTable {
  std::vector<std::vector<double>> q;  // q[h] = table of Q~_h
  std::vector<double> c;               // c[h * n + h'], lifted to (-1/2, 1/2]
  std::vector<double> b;               // averaged corrector
  double max_deviation = 0.0;          // constancy gate statistic
  double max_coboundary_defect = 0.0;  // |c - (b(h) + b(h') - b(h+h'))|
};

struct DecodeReport {
  DecodeStatus status = DecodeStatus::ok;
  std::string message;
  PolyPhase phase;
  cplx constant = 1.0;
  double residual_l1 = 0.0;
  std::vector<LevelDiagnostics> levels;  // levels[0] is the top call
  std::optional<std::size_t> uncovered;  // lag that broke the covering step
  double certification_defect = 0.0;
  std::optional<CocycleTable> cocycle;

  bool ok() const { return status == DecodeStatus::ok; }
};

struct MeanDecode {
  cplx c = 1.0;
  double residual = 0.0;
};

// ||f - c e(P)||_{L^1}
double l1_residual(const Signal& f, cplx c, const PolyPhase& p);

MeanDecode decode_base_mean(const Signal& f);
DecodeReport decode_base_linear(const Signal& f, const Tolerances& tol = default_tolerances());
DecodeReport decode_group(const Signal& f, int k, const Tolerances& tol = default_tolerances());
DecodeReport decode_interval(const Signal& f, int k, const Tolerances& tol = default_tolerances());

struct SeparationResult {
  std::size_t n = 0;
  int k = 0;
  std::size_t enumerated = 0;        // polynomials modulo constants, including constants
  double min_distance = 0.0;         // over the nonconstant ones
  double bound = 0.0;                // 2^{-k+1/2}
  std::vector<double> argmin_coeffs; // binomial basis, c_1..c_k
  bool holds() const { return min_distance >= bound; }
};
SeparationResult separation_scan(std::size_t n, int k, const Tolerances& tol = default_tolerances());

}  // namespace gowers
