#pragma once

#include <cstddef>
#include <functional>

namespace bhed {

/// Worker count from BHED_THREADS, defaulting to the hardware concurrency.
int worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
/// n and the worker count, and every index is written by exactly one chunk,
/// so results never depend on scheduling. Nested calls run serially.
void parallel_for(std::size_t n, std::size_t min_chunk, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace bhed
