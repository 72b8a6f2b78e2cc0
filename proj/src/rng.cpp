#include "gowers/rng.hpp"

#include <cmath>

namespace gowers {

std::uint64_t CounterRng::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection keeps the draw unbiased.
  for (;;) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    const auto low = static_cast<std::uint64_t>(m);
    if (low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

double CounterRng::normal() {
  // Box-Muller; uses two draws per value so the stream position stays simple.
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace gowers
