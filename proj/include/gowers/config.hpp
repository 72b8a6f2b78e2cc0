#pragma once

#include <cstddef>
#include <string>

namespace gowers {

// Every numerical threshold used by the library lives here so that a run can
// be reproduced from a single record. Defaults match the documented values in
// README.md; the CLI exposes named profiles.
struct Tolerances {
  double poly = 1e-8;               // vanishing (d+1)-fold differences, mod 1
  double mag_clamp = 0.5;           // |f| below this is treated as unknown phase
  double accept_scale = 1.0;        // derivative admitted when residual <= accept_scale * 2^-k
  double negative_clamp = 1e-12;    // rounding allowed below zero before a hard error
  double level_set = 0.5;           // coset detector: level-set threshold
  double intersection_cap = 0.25;   // coset detector: |H cap (H+h)| >= (1-cap)|H|
  double direct_work_cap = 1e10;    // |G|^(k+1) operations refused by the direct backend
  double boundary_mass = 1e-6;      // grid wraparound flag
  double nyquist_mass = 1e-6;       // grid aliasing flag
  double heisenberg_tail = 1e-10;   // truncated window mass
  std::size_t scan_cap = 1u << 17;  // largest quadratic scan denominator
  std::size_t enum_cap = 2000000;   // polynomial enumeration cap for separation_scan

  // Admission threshold for derivative decodes at degree parameter k.
  double accept_threshold(int k) const;
  // Near-constancy gate for cocycle defects.
  double cocycle_gate(int k) const;
};

const Tolerances& default_tolerances();

// "default", "strict" or "loose"; throws UsageError for anything else.
Tolerances tolerance_profile(const std::string& name);

// Interval decoder: smallest admissible N for degree parameter k.
std::size_t interval_min_length(int k);

}  // namespace gowers
