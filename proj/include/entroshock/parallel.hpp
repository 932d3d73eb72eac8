#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace entroshock {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. fn must not throw; callers capture
// per-item results (including errors) into slots indexed by i.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    auto count = std::min<std::size_t>(jobs, n);
    workers.reserve(count);
    for (std::size_t t = 0; t < count; ++t)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

}  // namespace entroshock
