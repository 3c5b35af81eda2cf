#pragma once

// Parallel loop and reduction primitives used by all per-node kernels.
//
// Every result must be bitwise independent of the thread count: loops write
// disjoint slots, and reductions accumulate over fixed-size chunks that are
// combined sequentially in index order.

#include <atomic>
#include <cstdint>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace lmc::par {

namespace detail {
inline std::atomic<bool>& force_serial_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}
}  // namespace detail

inline bool serial_forced() { return detail::force_serial_flag().load(std::memory_order_relaxed); }

// RAII switch used by tests and the benchmark to run the same code serially.
class SerialGuard {
public:
    SerialGuard() : prev_(detail::force_serial_flag().exchange(true)) {}
    ~SerialGuard() { detail::force_serial_flag().store(prev_); }
    SerialGuard(const SerialGuard&) = delete;
    SerialGuard& operator=(const SerialGuard&) = delete;

private:
    bool prev_;
};

template <typename F>
void serial_for(std::int64_t n, F&& f) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

template <typename F>
void parallel_for(std::int64_t n, F&& f) {
#if defined(_OPENMP)
    if (!serial_forced()) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#endif
    serial_for(n, f);
}

inline constexpr std::int64_t kReduceChunk = 1024;

// Deterministic sum: per-chunk partial sums (parallel), combined in chunk order.
template <typename F>
double sum_over(std::int64_t n, F&& f) {
    if (n <= 0) return 0.0;
    const std::int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
    parallel_for(nchunks, [&](std::int64_t c) {
        const std::int64_t lo = c * kReduceChunk;
        const std::int64_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += f(i);
        partial[static_cast<std::size_t>(c)] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <typename F>
double max_over(std::int64_t n, F&& f, double init) {
    if (n <= 0) return init;
    const std::int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), init);
    parallel_for(nchunks, [&](std::int64_t c) {
        const std::int64_t lo = c * kReduceChunk;
        const std::int64_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
        double m = init;
        for (std::int64_t i = lo; i < hi; ++i) {
            const double v = f(i);
            if (v > m) m = v;
        }
        partial[static_cast<std::size_t>(c)] = m;
    });
    double m = init;
    for (double v : partial) {
        if (v > m) m = v;
    }
    return m;
}

template <typename F>
double min_over(std::int64_t n, F&& f, double init) {
    return -max_over(n, [&](std::int64_t i) { return -f(i); }, -init);
}

}  // namespace lmc::par
