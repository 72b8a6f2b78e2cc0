#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace gowers {

using cplx = std::complex<double>;

namespace simd {

enum class Isa { scalar, avx2 };

// Hot inner loops of the engine. Every reduction is a fixed pairwise tree over
// 64-element leaves, so a given ISA produces bit-identical sums regardless of
// threading. The two ISAs may differ in the last few ulps.
struct KernelSet {
  Isa isa;
  const char* name;
  void (*mul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);       // a*b
  void (*mul_conj)(const cplx* a, const cplx* b, cplx* out, std::size_t n);  // a*conj(b)
  cplx (*sum)(const cplx* a, std::size_t n);
  double (*sum_real)(const double* a, std::size_t n);
  double (*sum_abs2)(const cplx* a, std::size_t n);
  double (*sum_abs4)(const cplx* a, std::size_t n);
};

const KernelSet& scalar_kernels();
// nullptr when the binary was built without AVX2 support.
const KernelSet* avx2_kernels();
bool cpu_supports(Isa isa);

// The set used by the library. Chosen once from the CPU, overridable through
// the GOWERS_SIMD environment variable ("scalar" or "avx2") or select().
const KernelSet& active();
void select(Isa isa);
Isa parse_isa(const std::string& name);

}  // namespace simd
}  // namespace gowers
