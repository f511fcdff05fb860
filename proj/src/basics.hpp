#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>
#include <functional>
#include <thread>
#include <atomic>
#include <mutex>
#include <cstdlib>

namespace vl {

using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;

// Raised for caller errors (bad input, mixed fields, overflow).
struct VlError : std::runtime_error {
    explicit VlError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an internal consistency check fails (bug signal, not user error).
struct VlInternal : std::runtime_error {
    explicit VlInternal(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw VlError(msg);
}
inline void check_internal(bool cond, const std::string& msg) {
    if (!cond) throw VlInternal(msg);
}

// SplitMix64: all randomized paths take explicit seeds and draw from this.
struct Rng {
    u64 state;
    explicit Rng(u64 seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) { return n ? next() % n : 0; } // fine for small n
    // Deterministic stream split for per-task seeds.
    u64 fork(u64 task_index) const {
        Rng r(state ^ (0xa0761d6478bd642fULL * (task_index + 1)));
        return r.next();
    }
};

inline unsigned thread_cap() {
    if (const char* env = std::getenv("VERLINDE_LAB_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Deterministic parallel map: results land in preallocated slots indexed by
// task, so the merge order never depends on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned nthreads = thread_cap();
    if (nthreads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(nthreads, count));
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace vl
