#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace xxzsim {

// Thread count resolution: explicit argument > XXZSIM_THREADS env var >
// hardware concurrency.  0 means "resolve".
int resolve_threads(int requested = 0);

// Runs fn(begin, end) on contiguous index ranges covering [0, n).  Each range
// is processed by one worker; callers must make per-index work independent
// and write results into per-index slots.  The partition depends only on n
// and the worker count handed to the chunking below, never on scheduling, and
// per-index outputs make the result independent of the thread count entirely.
void parallel_ranges(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Convenience wrapper: fn(index) per item.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace xxzsim
