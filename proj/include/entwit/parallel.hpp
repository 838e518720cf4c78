#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace entwit {

// Runs fn(0..n-1) on up to `threads` workers and returns results in index
// order, so reductions are deterministic regardless of thread count.
template <typename T, typename Fn>
std::vector<T> run_indexed(int n, int threads, Fn fn) {
    std::vector<T> out(n);
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) out[i] = fn(i);
        });
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace entwit
