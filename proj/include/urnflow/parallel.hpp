#pragma once

#include <cstddef>
#include <functional>

namespace urnflow {

// Runs fn(0) .. fn(count - 1) across a small thread pool. Work is
// partitioned by index, so with per-index random streams and per-index
// result slots the outcome does not depend on the thread count. The pool
// size is capped by the URNFLOW_THREADS environment variable.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

std::size_t thread_budget();

}  // namespace urnflow
