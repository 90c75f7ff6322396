#pragma once

#include <cstddef>
#include <functional>

namespace lid {

// Worker count used when a caller passes threads <= 0. Initialized from the
// LID_THREADS environment variable, falling back to hardware concurrency.
int default_thread_count();
void set_default_thread_count(int threads);  // <= 0 restores auto

// Runs fn(i) for every i in [0, count). fn must only touch state owned by
// item i; outputs are then independent of the thread partition. Exceptions
// from workers are rethrown on the calling thread.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace lid
