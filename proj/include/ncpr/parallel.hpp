#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace ncpr {

// Runs f(i) for i in [0,n) on up to `jobs` workers. Work items own their
// output slots, so results are deterministic regardless of scheduling.
inline void parallel_for(int jobs, int n, const std::function<void(int)>& f) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    int workers = std::min(jobs, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace ncpr
