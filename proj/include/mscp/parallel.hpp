#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace mscp {

// Runs fn(i) for i in [begin, end) across up to `threads` workers.
// fn must be safe to call concurrently for distinct i.
inline void parallel_for(long begin, long end, const std::function<void(long)> &fn,
                         unsigned threads = 0) {
    const long count = end - begin;
    if (count <= 0) return;
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads <= 1 || count == 1) {
        for (long i = begin; i < end; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(
        std::min<long>(count, static_cast<long>(threads)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = begin + w; i < end; i += workers) fn(i);
        });
    }
    for (auto &th : pool) th.join();
}

} // namespace mscp
