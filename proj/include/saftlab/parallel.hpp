#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace saftlab {

// Thread cap: SAFTLAB_THREADS env var, 0 or unset = hardware concurrency.
inline std::size_t thread_count() {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SAFTLAB_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) return std::min<std::size_t>(static_cast<std::size_t>(n), hw);
    }
    return hw;
}

// Static block partition of [0, n); body(i) must write only to slot i state.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    std::size_t nt = std::min(thread_count(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace saftlab
