#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sfnlm {

inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for every i in [0, n). Each index is processed by exactly one
// worker, so results are deterministic as long as fn(i) writes only to slot i.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    if (n <= 0) return;
    const int nthreads = std::min<std::int64_t>(resolve_thread_count(threads), n);
    if (nthreads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }

    const std::int64_t chunk = std::max<std::int64_t>(1, n / (8 * nthreads));
    std::atomic<std::int64_t> cursor{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::int64_t begin = cursor.fetch_add(chunk);
            if (begin >= n) return;
            const std::int64_t end = std::min(begin + chunk, n);
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sfnlm
