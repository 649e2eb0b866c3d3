#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace geometa {

/// Worker count from GEOMETA_THREADS, else the hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("GEOMETA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Splits [0, n) into contiguous chunks, evaluates `chunk(begin, end)` on up to
/// `workers` threads and folds the partial results left to right with
/// `combine`. Chunks are folded in index order, so a combine that keeps the
/// earlier operand on ties gives the same answer for any worker count.
template <class Partial, class ChunkFn, class Combine>
Partial parallel_reduce(std::size_t n, unsigned workers, Partial init, ChunkFn&& chunk,
                        Combine&& combine) {
    if (n == 0) return init;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 256))));
    if (workers == 1) return combine(std::move(init), chunk(std::size_t{0}, n));

    std::vector<Partial> partials(workers, init);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * step);
        const std::size_t end = std::min(n, begin + step);
        threads.emplace_back([&, w, begin, end] { partials[w] = chunk(begin, end); });
    }
    for (auto& t : threads) t.join();

    Partial acc = std::move(init);
    for (auto& p : partials) acc = combine(std::move(acc), std::move(p));
    return acc;
}

}  // namespace geometa
