#include "gowers/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "gowers/error.hpp"

namespace gowers::simd {

#ifndef GOWERS_HAVE_AVX2
const KernelSet* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa parse_isa(const std::string& name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  usage_fail("unknown SIMD backend '" + name + "' (expected scalar or avx2)");
}

namespace {

const KernelSet* initial() {
  if (const char* env = std::getenv("GOWERS_SIMD")) {
    const Isa want = parse_isa(env);
    if (want == Isa::avx2 && !cpu_supports(Isa::avx2))
      throw UsageError("GOWERS_SIMD=avx2 requested but the CPU or build lacks AVX2");
    return want == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
  }
  return cpu_supports(Isa::avx2) ? avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelSet*>& slot() {
  static std::atomic<const KernelSet*> s{initial()};
  return s;
}

}  // namespace

const KernelSet& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!cpu_supports(isa)) throw UsageError("requested SIMD backend is not available here");
  slot().store(isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels(), std::memory_order_release);
}

}  // namespace gowers::simd
