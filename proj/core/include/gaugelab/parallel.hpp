#pragma once

#include <cstddef>
#include <functional>

namespace gaugelab {

/// Worker count: GAUGELAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_limit();

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = thread_limit()).
/// If any call throws, the exception from the smallest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace gaugelab
