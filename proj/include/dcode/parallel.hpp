#pragma once

#include <cstddef>
#include <functional>

namespace dcode {

// --threads / DCODE_THREADS / hardware_concurrency, in that order.
unsigned default_thread_count();

/**
 * Runs body(0..count-1) across at most `threads` workers with static
 * chunking. Results must not depend on which worker runs which index; callers
 * guarantee that by writing only to per-index slots.
 */
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

} // namespace dcode
