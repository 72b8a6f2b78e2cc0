// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "gowers/kernels.hpp"
#include "kernels_tree.hpp"

namespace gowers::simd {

namespace {

using detail::tree_reduce;

// Two complex numbers per register: [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d asw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(asw, bi));
}

inline __m256d conj2(__m256d b) {
  const __m256d mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  return _mm256_xor_pd(b, mask);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void mul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul(load2(a + i), load2(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul(load2(a + i), conj2(load2(b + i))));
  for (; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

cplx sum(const cplx* a, std::size_t n) {
  return tree_reduce<cplx>(a, n, [](const cplx* p, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) acc = _mm256_add_pd(acc, load2(p + i));
    alignas(32) double t[4];
    _mm256_store_pd(t, acc);
    double re = t[0] + t[2], im = t[1] + t[3];
    for (; i < m; ++i) {
      re += p[i].real();
      im += p[i].imag();
    }
    return cplx(re, im);
  });
}

double sum_real(const double* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const double* p, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
    double s = hsum(acc);
    for (; i < m; ++i) s += p[i];
    return s;
  });
}

double sum_abs2(const cplx* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const cplx* p, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
      const __m256d v = load2(p + i);
      acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < m; ++i) s += std::norm(p[i]);
    return s;
  });
}

double sum_abs4(const cplx* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const cplx* p, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      const __m256d v0 = load2(p + i), v1 = load2(p + i + 2);
      // hadd pairs re^2+im^2 into [|z0|^2 |z2|^2 |z1|^2 |z3|^2]
      const __m256d q = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
      acc = _mm256_fmadd_pd(q, q, acc);
    }
    double s = hsum(acc);
    for (; i < m; ++i) {
      const double q = std::norm(p[i]);
      s += q * q;
    }
    return s;
  });
}

}  // namespace

const KernelSet* avx2_kernels() {
  static const KernelSet k{Isa::avx2, "avx2", mul, mul_conj, sum, sum_real, sum_abs2, sum_abs4};
  return &k;
}

}  // namespace gowers::simd
