#pragma once

#include <cstddef>
#include <functional>

namespace trajsim {

/// Runs fn(begin, end) over a static block partition of [0, n) on `threads`
/// workers (inline when threads ≤ 1 or n is small). The partition depends
/// only on (n, threads), so any per-block outputs merge deterministically.
void parallel_blocks(std::size_t n, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

/// Same partition, with the block ordinal as the first argument — for
/// callers that keep per-worker state to merge afterwards. Returns the
/// number of blocks used.
std::size_t parallel_blocks_indexed(
    std::size_t n, std::size_t threads,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// TRAJSIM_THREADS environment variable, else 1.
std::size_t default_thread_count();

}  // namespace trajsim
