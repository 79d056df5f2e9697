#pragma once

#include <cstddef>
#include <functional>

namespace bsp {

// Number of workers to use when the caller passes 0.
int default_workers();

// Calls fn(i) for every i in [0, count). Work is handed out dynamically, so
// callers must write results into slot i rather than appending; that keeps
// output independent of the worker count. workers <= 1 runs inline on the
// calling thread. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace bsp
