#pragma once

#include <cstddef>
#include <functional>

namespace gowers {

// Worker count used by data-parallel loops (default 1, set by --threads).
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers
// store results by index and reduce afterwards, which keeps output independent
// of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gowers
