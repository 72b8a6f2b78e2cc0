#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gowers/decoder.hpp"
#include "gowers/domain.hpp"

namespace gowers {

struct MarkovSplit {
  std::vector<std::size_t> exceptional;  // E = {x : g(x) > sqrt(eps) f(x)}
  double mass_fraction = 0.0;            // int_E f / int f
  double max_ratio_off = 0.0;            // max g/f off E (0 where f = 0 and g = 0)
  bool certified = false;                // both certificates hold
};

// f and g must be real and nonnegative with int g <= eps int f.
MarkovSplit markov_split(const Signal& f, const Signal& g, double eps);

struct HolderMatch {
  std::vector<std::size_t> exceptional;
  std::vector<double> constants;   // c_i = ||f_i||_{p_i}^{-p_i}
  std::vector<double> mass_on_e;   // int_E c_i f_i^{p_i}
  double band = 0.0;               // max off E of |c_i f_i^p_i - c_j f_j^p_j| / sum_i theta_i c_i f_i^p_i
  double deficit = 0.0;            // 1 - (||prod f_i||_p / prod ||f_i||_{p_i})^p
  MarkovSplit split;
};

// Factors must be real, nonnegative and not identically zero.
HolderMatch holder_level_match(const std::vector<Signal>& factors, const std::vector<double>& exponents,
                               double eps);

struct SumsetResult {
  bool subgroup = false;
  std::vector<std::size_t> h0;  // K - K when it verified as a subgroup
  double ratio = 0.0;           // |K - K| / |K|
};

SumsetResult sumset_group_test(const std::vector<std::size_t>& K, const DomainSpec& domain);

// Generators g_j of a subgroup with H = direct sum of <g_j>, each of order m_j.
struct SubgroupBasis {
  std::vector<std::size_t> generators;
  std::vector<std::size_t> orders;
};
SubgroupBasis subgroup_basis(const DomainSpec& domain, const std::vector<std::size_t>& h);

struct CosetDetection {
  bool ok = false;
  std::string message;
  CosetDescriptor coset;
  double magnitude_residual = 0.0;
  double uk = 0.0;
  std::size_t level_set_size = 0;
  std::size_t stabilizer_size = 0;  // |K|
  double sumset_ratio = 0.0;
};

CosetDetection detect_coset(const Signal& f, int k, double eps, const Tolerances& tol = default_tolerances());

struct CosetReport {
  bool ok = false;
  std::string message;
  CosetDetection detection;
  SubgroupBasis basis;
  PolyPhase phase;  // on the subgroup, identified with prod Z/m_j through the basis
  cplx c = 1.0;
  double total_residual = 0.0;
  DecodeReport decode;
  std::vector<cplx> model;  // mu(H)^{-1/p_k} 1_H c e(P(. - x0)) on G
};

CosetReport recover_structured(const Signal& f, int k, double eps, const Tolerances& tol = default_tolerances());

}  // namespace gowers
