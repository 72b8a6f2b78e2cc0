#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gowers/kernels.hpp"

namespace gowers::fft {

// Unnormalized multi-dimensional DFT over a row-major array of the given shape.
// sign = -1 computes sum_x a(x) e(-xi.x), sign = +1 the conjugate kernel.
void transform(std::span<const cplx> in, std::span<cplx> out,
               std::span<const std::size_t> shape, int sign);

inline std::vector<cplx> forward(std::span<const cplx> in, std::span<const std::size_t> shape) {
  std::vector<cplx> out(in.size());
  transform(in, out, shape, -1);
  return out;
}

inline std::vector<cplx> backward(std::span<const cplx> in, std::span<const std::size_t> shape) {
  std::vector<cplx> out(in.size());
  transform(in, out, shape, +1);
  return out;
}

// 1-D convenience.
std::vector<cplx> forward_1d(std::span<const cplx> in);

// Smallest 7-smooth integer >= n.
std::size_t good_size(std::size_t n);

}  // namespace gowers::fft
