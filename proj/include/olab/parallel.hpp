#ifndef OLAB_PARALLEL_HPP
#define OLAB_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace olab {

// Thread count resolution: explicit request, else OVERLAP_LAB_THREADS, else 1.
inline unsigned resolve_thread_count(unsigned requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OVERLAP_LAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

// Static partition of [0, n) into contiguous chunks, one thread per chunk.
// Results must be written into per-index slots so the outcome is independent
// of the partition.
inline void parallel_chunks(size_t n, unsigned threads,
                            const std::function<void(size_t, size_t)>& fn)
{
    if (threads <= 1 || n <= 1) {
        fn(0, n);
        return;
    }
    threads = static_cast<unsigned>(std::min<size_t>(threads, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const size_t begin = static_cast<size_t>(t) * chunk;
        const size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, t, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace olab

#endif
