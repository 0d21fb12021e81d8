#pragma once

#include <cstddef>
#include <functional>

namespace regen {

// Worker count: REGEN_THREADS if set to a positive integer, otherwise the
// hardware concurrency, clamped to [1, tasks].
unsigned worker_count(std::size_t tasks);

// Runs task(i) for i in [0, count) on up to worker_count(count) threads.
// Tasks must write only to their own slot; the first exception thrown by any
// task is rethrown after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace regen
