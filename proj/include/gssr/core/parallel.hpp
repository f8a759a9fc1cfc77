#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace gssr {

/// Process-wide worker count used by parallel_* helpers. 0 picks the hardware
/// concurrency. Numerical results never depend on this value: work is split
/// into fixed-size chunks and chunk results are merged in index order.
inline int& worker_count() {
    static int workers = 1;
    return workers;
}

inline void set_worker_count(int workers) { worker_count() = workers < 0 ? 0 : workers; }

inline int effective_workers() {
    int w = worker_count();
    if (w == 0) {
        w = int(std::thread::hardware_concurrency());
        if (w <= 0) w = 1;
    }
    return w;
}

/// Runs body(begin, end) over [0, n) split into contiguous chunks. The chunk
/// boundaries depend only on n, so per-chunk outputs are reproducible across
/// worker counts; bodies must not share mutable state across chunks.
inline void parallel_chunks(size_t n, size_t chunk, const std::function<void(size_t, size_t)>& body) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const size_t num_chunks = (n + chunk - 1) / chunk;
    const int workers = std::min<int>(effective_workers(), int(num_chunks));
    if (workers <= 1) {
        for (size_t c = 0; c < num_chunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (size_t c = size_t(t); c < num_chunks; c += size_t(workers))
                body(c * chunk, std::min(n, (c + 1) * chunk));
        });
    }
    for (auto& th : pool) th.join();
}

/// Deterministic parallel reduction: map each fixed chunk to a partial value,
/// then fold the partials serially in chunk order.
inline double parallel_reduce(size_t n, size_t chunk, const std::function<double(size_t, size_t)>& map) {
    if (n == 0) return 0.0;
    if (chunk == 0) chunk = 1;
    const size_t num_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(num_chunks, 0.0);
    parallel_chunks(n, chunk, [&](size_t begin, size_t end) { partial[begin / chunk] = map(begin, end); });
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
}

}  // namespace gssr
