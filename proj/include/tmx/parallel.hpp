#pragma once

#include <cstddef>
#include <functional>

namespace tmx {

/// Worker count: TMX_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; callers write results to slot i so the outcome does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tmx
