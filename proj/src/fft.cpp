#include "gowers/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <utility>

#include "gowers/error.hpp"

namespace gowers::fft {

namespace {

// FFTW's planner is not re-entrant, execution is. Plans are made once per
// (shape, sign) with FFTW_UNALIGNED so they can run on any caller buffer,
// which also pins the codelet choice and keeps results reproducible.
class PlanCache {
 public:
  fftw_plan get(std::span<const std::size_t> shape, int sign) {
    std::vector<std::size_t> key(shape.begin(), shape.end());
    key.push_back(sign < 0 ? 0 : 1);
    std::lock_guard lk(mu_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    std::vector<int> dims;
    for (auto s : shape) {
      total *= s;
      dims.push_back(static_cast<int>(s));
    }
    auto* buf = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw ComputationError("FFTW could not plan the requested transform");
    plans_.emplace(std::move(key), p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::vector<std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform(std::span<const cplx> in, std::span<cplx> out, std::span<const std::size_t> shape,
               int sign) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (in.size() != total || out.size() != total)
    throw UsageError("fft: buffer length does not match shape");
  if (total == 0) return;
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  if (total == 1) return;
  fftw_plan p = cache().get(shape, sign);
  auto* io = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, io, io);
}

std::vector<cplx> forward_1d(std::span<const cplx> in) {
  const std::size_t n = in.size();
  return forward(in, std::span<const std::size_t>(&n, 1));
}

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace gowers::fft
