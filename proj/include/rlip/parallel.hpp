#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rlip {

/// Runs fn(i) for i in [0, n) on up to `threads` threads with static chunks.
/// fn must only write to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    const std::size_t end = std::min(n, (t + 1) * chunk);
                    for (std::size_t i = t * chunk; i < end; ++i) fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace rlip
