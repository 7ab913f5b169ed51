#ifndef SHIFTMETRIC_PARALLEL_HPP
#define SHIFTMETRIC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace shiftmetric {

// Number of worker threads: SHIFTMETRIC_THREADS if set, else hardware
// concurrency.
unsigned thread_count();

// Runs fn(i) for i in [0, count).  Work items are claimed from a shared
// atomic counter; callers write results into preallocated slots indexed by i,
// so output never depends on scheduling.  Exceptions from workers are
// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace shiftmetric

#endif
