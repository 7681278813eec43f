#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tlg {

/// Runs fn(block) for block = 0..n_blocks-1 across hardware threads.
/// Each block must only touch its own state (typically a derived RNG stream
/// and a private accumulator), so results are identical for any thread count.
inline void run_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& fn) {
    unsigned n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    if (n_threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    std::size_t stride = n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t b = t; b < n_blocks; b += stride) fn(b);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tlg
