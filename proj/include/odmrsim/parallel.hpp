#pragma once

#include <functional>

namespace odmrsim {

/// Runs fn(i) for i in [0, n). With n_threads > 1 the indices are handed to
/// a worker pool; every index writes only its own output slot, so results
/// are identical to the serial order. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn);

}  // namespace odmrsim
