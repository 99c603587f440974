#include "cpflow/parallel.hpp"

#include <atomic>

namespace cpflow {
namespace {
std::atomic<unsigned> cap{0};
} // namespace

void set_thread_cap(unsigned n) noexcept { cap.store(n, std::memory_order_relaxed); }

unsigned thread_cap() noexcept {
    const unsigned c = cap.load(std::memory_order_relaxed);
    if (c != 0) return c;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace cpflow
