#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gowers/domain.hpp"
#include "gowers/engine.hpp"
#include "gowers/kernels.hpp"
#include "gowers/parallel.hpp"
#include "gowers/rng.hpp"

using namespace gowers;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(rng.normal(), rng.normal());
  return v;
}

// Plain left-to-right loops in long double: the reference for both ISAs.
struct Naive {
  static std::complex<long double> sum(const std::vector<cplx>& a) {
    std::complex<long double> s = 0;
    for (auto z : a) s += std::complex<long double>(z.real(), z.imag());
    return s;
  }
  static long double abs_pow(const std::vector<cplx>& a, int p) {
    long double s = 0;
    for (auto z : a) s += std::pow(std::norm(std::complex<long double>(z.real(), z.imag())), p / 2);
    return s;
  }
};

void check_against_naive(const simd::KernelSet& K) {
  for (std::size_t n : {0, 1, 3, 7, 64, 65, 1000, 4099}) {
    const auto a = random_vec(n, n + 1), b = random_vec(n, n + 1000);
    std::vector<cplx> out(n), out2(n);
    K.mul(a.data(), b.data(), out.data(), n);
    K.mul_conj(a.data(), b.data(), out2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(out[i] - a[i] * b[i]) <= 1e-14 * (1 + std::abs(a[i] * b[i])));
      CHECK(std::abs(out2[i] - a[i] * std::conj(b[i])) <= 1e-14 * (1 + std::abs(a[i] * b[i])));
    }
    const auto ref = Naive::sum(a);
    const cplx s = K.sum(a.data(), n);
    const double scale = 1e-13 * (1 + static_cast<double>(n));
    CHECK(std::abs(s.real() - static_cast<double>(ref.real())) <= scale);
    CHECK(std::abs(s.imag() - static_cast<double>(ref.imag())) <= scale);
    const double a2 = K.sum_abs2(a.data(), n), a4 = K.sum_abs4(a.data(), n);
    CHECK(std::abs(a2 - static_cast<double>(Naive::abs_pow(a, 2))) <= 1e-13 * (1 + a2));
    CHECK(std::abs(a4 - static_cast<double>(Naive::abs_pow(a, 4))) <= 1e-13 * (1 + a4));
    std::vector<double> re(n);
    long double rs = 0;
    for (std::size_t i = 0; i < n; ++i) rs += re[i] = a[i].real();
    CHECK(std::abs(K.sum_real(re.data(), n) - static_cast<double>(rs)) <= scale);
  }
}

}  // namespace

TEST_CASE("scalar kernels agree with naive loops") { check_against_naive(simd::scalar_kernels()); }

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* avx = simd::avx2_kernels();
  if (!avx || !simd::cpu_supports(simd::Isa::avx2)) {
    MESSAGE("AVX2 kernels unavailable on this machine; skipped");
    return;
  }
  check_against_naive(*avx);
  const auto& S = simd::scalar_kernels();
  for (std::size_t n : {5, 64, 129, 10000}) {
    const auto a = random_vec(n, 77 + n);
    const cplx s1 = S.sum(a.data(), n), s2 = avx->sum(a.data(), n);
    CHECK(std::abs(s1 - s2) <= 1e-12 * (1 + std::abs(s1)));
    CHECK(std::abs(S.sum_abs4(a.data(), n) - avx->sum_abs4(a.data(), n)) <= 1e-12 * S.sum_abs4(a.data(), n));
  }
}

TEST_CASE("norm values do not depend on the kernel set beyond rounding") {
  const auto* avx = simd::avx2_kernels();
  if (!avx || !simd::cpu_supports(simd::Isa::avx2)) return;
  const Signal f(DomainSpec::cyclic(60), random_vec(60, 5));
  simd::select(simd::Isa::scalar);
  const double a = uk_recursive(f, 3).value, b = u2_fft(f).value;
  simd::select(simd::Isa::avx2);
  const double c = uk_recursive(f, 3).value, d = u2_fft(f).value;
  CHECK(std::abs(a - c) <= 1e-12 * a);
  CHECK(std::abs(b - d) <= 1e-12 * b);
}

TEST_CASE("results are bit-identical across thread counts") {
  const Signal f(DomainSpec::group({4, 6}), random_vec(24, 9));
  set_thread_count(1);
  const double a = uk_recursive(f, 4).value, ad = uk_direct(f, 3).value;
  set_thread_count(4);
  const double b = uk_recursive(f, 4).value, bd = uk_direct(f, 3).value;
  set_thread_count(1);
  CHECK(a == b);
  CHECK(ad == bd);
}

TEST_CASE("parallel_for visits each index once") {
  set_thread_count(3);
  std::vector<int> hits(1001, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  set_thread_count(1);
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("counter rng is a pure function of seed, stream and position") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterRng u(3);
  double mean = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    mean += x;
  }
  CHECK(std::abs(mean / 100000 - 0.5) < 0.01);
  for (int i = 0; i < 1000; ++i) CHECK(u.below(7) < 7);
}
