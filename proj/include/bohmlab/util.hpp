#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace bohmlab {

// Non-fatal conditions (clipped densities, frozen particles, ...) are pushed
// here when the caller passes a sink; otherwise they are dropped silently.
struct Warnings {
    std::vector<std::string> items;
    void add(std::string msg) { items.push_back(std::move(msg)); }
};

inline int thread_budget() {
    if (const char* env = std::getenv("BOHMLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Chunked element-wise loop. Each worker owns a disjoint index range, so
// bodies may write field[i] freely; reductions must stay on the caller side.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    int nt = thread_budget();
    if (nt <= 1 || n < 4096) {
        body(0, n);
        return;
    }
    std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk;
        if (lo >= n) break;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// Deterministic uniform doubles in [0,1) from a raw 64-bit stream.  Using the
// top 53 bits directly keeps the sequence identical across platforms, which
// std::uniform_real_distribution does not guarantee.
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace bohmlab
