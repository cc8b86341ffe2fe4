#pragma once

#include <cstddef>
#include <functional>

namespace g3 {

// Worker count: G3_THREADS if set and positive, else the hardware concurrency.
int thread_count();
// Splits [0, count) into contiguous chunks, one per worker; fn(begin, end).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace g3
