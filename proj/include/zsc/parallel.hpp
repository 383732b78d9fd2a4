#pragma once

// Deterministic data-parallel helpers. ZSC_THREADS caps the worker count;
// results are written into caller-owned slots indexed by the loop
// variable, so the outcome does not depend on scheduling.

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace zsc {

inline int max_threads() {
    if (const char* env = std::getenv("ZSC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    constexpr std::size_t chunk = 8;
    auto worker = [&] {
        for (;;) {
            const std::size_t lo = next.fetch_add(chunk);
            if (lo >= n) return;
            const std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace zsc
