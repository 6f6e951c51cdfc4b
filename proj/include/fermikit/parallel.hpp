#pragma once

#include <cstddef>
#include <functional>

namespace fermikit {

// Worker cap for parallel_for. Defaults to FERMIKIT_THREADS, else hardware concurrency.
void set_thread_limit(int threads);
int thread_limit();

// Runs body(i) for i in [0, count). Results must be written to per-index slots so
// reductions stay in index order. The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fermikit
