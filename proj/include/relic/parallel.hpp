#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace relic {

inline int default_jobs() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, total) into fixed chunks and runs fn(chunk_index, begin, end).
// Chunk boundaries depend only on `total`, never on `jobs`, so per-chunk
// results can be merged in chunk order to give output independent of jobs.
template <typename Fn>
void parallel_chunks(std::uint64_t total, int jobs, Fn&& fn) {
    if (total == 0) return;
    const std::uint64_t chunk = std::max<std::uint64_t>(1, (total + 255) / 256);
    const std::uint64_t nchunks = (total + chunk - 1) / chunk;
    if (jobs <= 1 || nchunks == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c)
            fn(c, c * chunk, std::min(total, (c + 1) * chunk));
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<std::uint64_t> next{0};
    int nthreads = static_cast<int>(std::min<std::uint64_t>(jobs, nchunks));
    for (int t = 0; t < nthreads; ++t) {
        workers.emplace_back([&]() {
            while (true) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) break;
                fn(c, c * chunk, std::min(total, (c + 1) * chunk));
            }
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace relic
