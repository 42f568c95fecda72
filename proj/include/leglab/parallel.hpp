#pragma once

#include <cstddef>
#include <functional>

namespace leglab {

/// Worker cap: set_thread_limit, else LEGLAB_THREADS, else the hardware concurrency.
int thread_limit();
/// n <= 0 restores the default.
void set_thread_limit(int n);

/// Runs body(0..count-1) on up to thread_limit() threads. The exception thrown at the
/// lowest index, if any, is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace leglab
