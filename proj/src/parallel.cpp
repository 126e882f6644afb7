#include "trajsim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace trajsim {

std::size_t parallel_blocks_indexed(
    std::size_t n, std::size_t threads,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return 0;
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        fn(0, 0, n);
        return 1;
    }

    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::size_t blocks = 0;
    for (std::size_t w = 0; w < threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        ++blocks;
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return blocks;
}

void parallel_blocks(std::size_t n, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    parallel_blocks_indexed(
        n, threads,
        [&fn](std::size_t, std::size_t begin, std::size_t end) { fn(begin, end); });
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("TRAJSIM_THREADS")) {
        char* endp = nullptr;
        const long v = std::strtol(env, &endp, 10);
        if (endp && *endp == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

}  // namespace trajsim
