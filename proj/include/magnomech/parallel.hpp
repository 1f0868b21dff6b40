#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace magnomech {

/// Worker count resolution: explicit request > MAGNOMECH_JOBS > 1.
inline int resolve_jobs(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MAGNOMECH_JOBS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

/// Runs fn(i) for i in [0, n) on `jobs` threads. Callers write results into
/// preallocated slots indexed by i, so the output is identical for any job
/// count. fn must not throw.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    jobs = resolve_jobs(jobs);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            fn(i);
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::size_t>(jobs, n));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace magnomech
