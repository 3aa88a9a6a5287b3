#ifndef GRE_PARALLEL_HPP
#define GRE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace gre {

/// Worker count: min(requested or hardware concurrency, GRE_THREADS).
/// `requested == 0` means "as many as allowed".
int thread_budget(int requested = 0);

/// Runs fn(0..count-1) across up to `max_threads` workers (0 = budget).
/// Iterations must write to disjoint slots; the first exception thrown by
/// any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int max_threads = 0);

}  // namespace gre

#endif
