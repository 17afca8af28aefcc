#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

/*
 * Minimal fork-join helper for the verification loops, which are
 * embarrassingly parallel over index ranges.  Results must be merged by
 * the caller with partition-independent operations (min/max/and), so the
 * outcome does not depend on the worker count.
 */

namespace loggrowth {

/// Worker count: PADIC_LOGGROWTH_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("PADIC_LOGGROWTH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 1024)
            throw std::invalid_argument("PADIC_LOGGROWTH_THREADS must be an integer in [1, 1024]");
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/*
 * Splits [0, count) into at most `workers` contiguous chunks and runs
 * body(begin, end, chunk_index) on each, chunk_index < workers.  The
 * first failing chunk's exception (by index) is rethrown on the caller.
 */
template <typename Body>
void parallel_chunks(std::uint64_t count, unsigned workers, Body&& body) {
    if (count == 0) return;
    const std::uint64_t n = std::min<std::uint64_t>(std::max(workers, 1u), count);
    if (n == 1) {
        body(std::uint64_t{0}, count, unsigned{0});
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n);
    const std::uint64_t base = count / n, extra = count % n;
    std::uint64_t begin = 0;
    for (unsigned c = 0; c < n; ++c) {
        const std::uint64_t end = begin + base + (c < extra ? 1 : 0);
        threads.emplace_back([&body, &errors, begin, end, c] {
            try {
                body(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace loggrowth
