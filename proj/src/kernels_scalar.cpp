#include "gowers/kernels.hpp"
#include "kernels_tree.hpp"

namespace gowers::simd {

namespace {

using detail::tree_reduce;

void mul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void mul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br + ai * bi, ai * br - ar * bi);
  }
}

cplx sum(const cplx* a, std::size_t n) {
  return tree_reduce<cplx>(a, n, [](const cplx* p, std::size_t m) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < m; ++i) {
      re += p[i].real();
      im += p[i].imag();
    }
    return cplx(re, im);
  });
}

double sum_real(const double* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const double* p, std::size_t m) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += p[i];
    return s;
  });
}

double sum_abs2(const cplx* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const cplx* p, std::size_t m) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += p[i].real() * p[i].real() + p[i].imag() * p[i].imag();
    return s;
  });
}

double sum_abs4(const cplx* a, std::size_t n) {
  return tree_reduce<double>(a, n, [](const cplx* p, std::size_t m) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double q = p[i].real() * p[i].real() + p[i].imag() * p[i].imag();
      s += q * q;
    }
    return s;
  });
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet k{Isa::scalar, "scalar", mul, mul_conj, sum, sum_real, sum_abs2, sum_abs4};
  return k;
}

}  // namespace gowers::simd
