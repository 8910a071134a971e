#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qpolar {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

// Run fn(chunk_index) for every chunk in [0, nchunks).  Work is pulled from an
// atomic counter; callers keep results in per-chunk slots and reduce them in
// chunk order afterwards, which makes the outcome independent of the thread
// count.
template <typename Fn>
void parallel_for_chunks(size_t nchunks, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || nchunks <= 1) {
        for (size_t c = 0; c < nchunks; c++) fn(c);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            fn(c);
        }
    };
    std::vector<std::thread> pool;
    int nt = std::min<size_t>((size_t)threads, nchunks);
    pool.reserve(nt);
    for (int t = 0; t < nt; t++) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}
