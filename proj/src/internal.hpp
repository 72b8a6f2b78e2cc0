#pragma once

#include <chrono>
#include <cstddef>

#include "gowers/domain.hpp"

namespace gowers::detail {

// out[x] = in[x - h] on the periodic array laid out like d.
void shift_into(const DomainSpec& d, const cplx* in, cplx* out, std::size_t h);

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace gowers::detail
