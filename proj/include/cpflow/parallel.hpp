#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cpflow {

/// Process-wide cap on worker threads; 0 means hardware_concurrency().
void set_thread_cap(unsigned n) noexcept;
unsigned thread_cap() noexcept;

/// Runs body(i) for i in [0, n).  Index i is always handled by worker
/// i % threads, so results written to slot i never depend on scheduling.
/// The first exception thrown by any body is rethrown on the caller.
/// Calls made from inside a worker run serially on that worker.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    static thread_local bool in_worker = false;
    const std::size_t threads = in_worker ? 1 : std::min<std::size_t>(thread_cap(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            in_worker = true;
            try {
                for (std::size_t i = t; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace cpflow
