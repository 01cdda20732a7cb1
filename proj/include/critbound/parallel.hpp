#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace critbound {

/// Process-wide worker count for parallel_for; 0 means hardware concurrency.
inline std::size_t& thread_count()
{
    static std::size_t n = 0;
    return n;
}

inline std::size_t effective_threads()
{
    const std::size_t n = thread_count();
    return n > 0 ? n : std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on a pool of threads. Results must be written
/// to per-index slots; the first exception is rethrown after the join.
template <class F>
void parallel_for(std::size_t n, F&& body)
{
    const std::size_t workers = std::min(effective_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) {
        pool.emplace_back(run);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace critbound
