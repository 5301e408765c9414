#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace latreg {

// Worker cap shared by all internally parallel reductions. 0 means "use the
// hardware count". Default is 1; the CLI raises it via --threads/LATREG_THREADS.
inline int& thread_limit_ref() {
    static int limit = 1;
    return limit;
}

inline void set_thread_limit(int n) { thread_limit_ref() = n < 0 ? 0 : n; }

inline int effective_threads() {
    int n = thread_limit_ref();
    if (n == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw ? static_cast<int>(hw) : 1;
    }
    return n;
}

// Chunked reduction with fixed chunk boundaries and a fixed combine order, so
// the result is bit-identical for every worker count.
template <class Term>
double parallel_sum(std::size_t n, Term&& term, std::size_t chunk = 8192) {
    if (n == 0) return 0.0;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, 0.0);

    auto run_chunks = [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            const std::size_t lo = c * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[c] = s;
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(effective_threads()), nchunks);
    if (workers <= 1) {
        run_chunks(0, nchunks);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        std::size_t per = nchunks / workers;
        std::size_t extra = nchunks % workers;
        std::size_t at = 0;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t count = per + (w < extra ? 1 : 0);
            pool.emplace_back(run_chunks, at, at + count);
            at += count;
        }
        for (auto& t : pool) t.join();
    }

    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

} // namespace latreg
