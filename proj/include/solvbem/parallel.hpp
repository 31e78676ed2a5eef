#pragma once

#include <cstddef>
#include <functional>

namespace solvbem {

/// Thread count: BEM_THREADS env var if set, else hardware concurrency.
int thread_count();

/// Override the thread count for this process (0 restores the default).
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// thread; each chunk runs sequentially so per-index results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace solvbem
