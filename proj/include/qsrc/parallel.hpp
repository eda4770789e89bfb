#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace qsrc {

// Runs fn(i) for i in [0, n).  Work is split into contiguous chunks, one per
// worker.  Results must be written to preallocated per-index slots so the
// outcome is independent of the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Pairwise (tree) summation.  The reduction tree depends only on the element
// count, so sums are bitwise reproducible for any thread count upstream.
template <typename T>
T tree_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    std::vector<T> level(v.begin(), v.end());
    while (level.size() > 1) {
        std::size_t half = level.size() / 2;
        for (std::size_t i = 0; i < half; ++i)
            level[i] = level[2 * i] + level[2 * i + 1];
        if (level.size() % 2) {
            level[half] = level.back();
            level.resize(half + 1);
        } else {
            level.resize(half);
        }
    }
    return level[0];
}

template <typename T>
T tree_sum(const std::vector<T>& v) {
    return tree_sum(std::span<const T>(v.data(), v.size()));
}

} // namespace qsrc
