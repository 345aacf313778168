#pragma once

#include <cstddef>
#include <functional>

namespace paralog {

/// Worker pool width: PARALOG_THREADS if set (>= 1), else hardware threads.
int worker_count();

/// Runs fn(i) for i in [0, count) on the pool. Callers write results into
/// index-owned slots, so output order never depends on scheduling. The first
/// exception thrown by a worker is rethrown after the join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace paralog
