#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gowers/domain.hpp"
#include "gowers/rng.hpp"

namespace gowers {

struct GenParams {
  DomainSpec domain = DomainSpec::cyclic(8);
  int degree = 2;                     // poly-phase, coset-phase
  int k = 3;                          // coset-phase: height mu(H)^{-1/p_k}
  double noise = 0.0;                 // noisy kinds
  std::size_t frequency = 1;          // character: dual element
  std::optional<std::size_t> generator;  // coset-phase: subgroup <generator>; unset picks one from the seed
  std::size_t offset = 0;             // coset-phase
  double sigma = 1.0;                 // gaussian-grid: exp(-pi |x|^2 / sigma^2)
  double modulation = 0.0;            // gaussian-grid: e(modulation x)
  double chirp = 0.0;                 // gaussian-grid: e(chirp x^2)
};

// Kinds: constant, character, poly-phase, coset-phase, gaussian-grid,
// random-unimodular, random-gaussian, random-bounded, noisy-poly-phase,
// magnitude-noise, random-grid.
Signal generate(const std::string& kind, const GenParams& p, std::uint64_t seed);
const std::vector<std::string>& generator_kinds();

// Random polynomial map of degree <= d that is well defined on the domain
// (cyclic and product groups, intervals).
PolyPhase random_poly_phase(const DomainSpec& d, int degree, CounterRng& rng);

// Low-frequency real perturbation with sup norm <= 1.
std::vector<double> smooth_noise(const DomainSpec& d, CounterRng& rng);

}  // namespace gowers
