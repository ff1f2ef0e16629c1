#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zerocorr {

/// Environment variable that caps the worker count.
inline constexpr const char* kWorkerCapVariable = "ZEROCORR_MAX_WORKERS";

/// Requested worker count after applying the default (hardware parallelism)
/// and the environment cap.
unsigned resolve_workers(unsigned requested);

/// Fixed chunk size used by every sampler. Chunk boundaries never depend on
/// the worker count, which is what makes reductions reproducible.
inline constexpr std::size_t kChunkSize = 4096;

/// Calls fn(chunk_index, begin, end) for every chunk of [0, total) and returns
/// the per-chunk results in chunk order. Chunks are claimed dynamically by
/// `workers` threads; the first exception thrown is rethrown.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::uint64_t total, unsigned workers, Fn&& fn) {
    const std::uint64_t chunks = (total + kChunkSize - 1) / kChunkSize;
    std::vector<Result> results(static_cast<std::size_t>(chunks));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                const std::uint64_t begin = c * kChunkSize;
                const std::uint64_t end = std::min<std::uint64_t>(total, begin + kChunkSize);
                results[static_cast<std::size_t>(c)] = fn(c, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(chunks, 1))));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// Running sums for a sample mean and its standard error.
struct MomentAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;
    std::uint64_t nonzero = 0;

    void add(double w) {
        sum += w;
        sum_sq += w * w;
        ++count;
        if (w != 0.0) ++nonzero;
    }
    void merge(const MomentAccumulator& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
        nonzero += o.nonzero;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double std_error() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double mu = sum / n;
        const double var = std::max(0.0, (sum_sq - n * mu * mu) / (n - 1.0));
        return std::sqrt(var / n);
    }
};

} // namespace zerocorr
