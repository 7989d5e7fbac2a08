// ensemble_detail.hpp — internal chunked trajectory driver (not installed)
//
// Trajectories are partitioned into fixed-size blocks independent of the
// worker count. Workers claim blocks through an atomic counter and write
// each block's partial result into its own slot; the caller merges slots in
// block order. Results are therefore bit-identical for any thread count.

#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace dephnet::detail {

inline constexpr std::uint64_t kChunkSize = 64;

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct ChunkRange {
    std::uint64_t begin;
    std::uint64_t end;  // exclusive
};

inline std::uint64_t chunk_count(std::uint64_t total) {
    return (total + kChunkSize - 1) / kChunkSize;
}

inline ChunkRange chunk_range(std::uint64_t chunk, std::uint64_t total) {
    const std::uint64_t b = chunk * kChunkSize;
    const std::uint64_t e = std::min(total, b + kChunkSize);
    return {b, e};
}

// Runs work(chunk_index, range) across `threads` workers. Exceptions in
// workers are rethrown on the calling thread.
template <class Work>
void run_chunked(std::uint64_t total, unsigned threads, Work&& work) {
    const std::uint64_t chunks = chunk_count(total);
    threads = std::min<std::uint64_t>(resolve_threads(threads), chunks == 0 ? 1 : chunks);
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) work(c, chunk_range(c, total));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
                    work(c, chunk_range(c, total));
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace dephnet::detail
