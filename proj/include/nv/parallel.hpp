#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace nv {

/// Split [0, n) into `threads` contiguous chunks, one worker each. With
/// threads <= 1 the body runs inline, which keeps single-thread runs
/// bitwise reproducible. fn(begin, end, thread_index).
inline void parallel_for(long n, int threads,
                         const std::function<void(long, long, int)>& fn) {
    if (threads <= 1 || n < 2 * threads) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long b = t * chunk;
        const long e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e, t] { fn(b, e, t); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nv
