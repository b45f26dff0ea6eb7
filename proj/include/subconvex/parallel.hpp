#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace subconvex {

// Worker cap: SUBCONVEX_THREADS env var if set (>=1), else hardware
// concurrency. Results are written by index, so parallel execution cannot
// change any output value or ordering.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("SUBCONVEX_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Run fn(i) for i in [0, n) on up to thread_cap() workers. Exceptions from
// workers are rethrown on the caller thread (first one wins).
inline void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = thread_cap();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace subconvex
