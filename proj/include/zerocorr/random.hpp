#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace zerocorr {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: maps a
/// 128-bit counter and a 64-bit key to 128 random bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// Reserved stream identifiers so that independent consumers of one seed
/// never overlap.
enum class StreamId : std::uint32_t {
    engine_monte_carlo = 1,
    engine_quasi_shift = 2,
    region_monte_carlo = 3,
    real_count_monte_carlo = 4,
    lab_coefficients = 16,
    tests = 255,
};

/// Counter-based random stream. A draw is a pure function of
/// (seed, stream, index, position within the stream), so parallel workers
/// reproduce exactly the same numbers regardless of scheduling.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, StreamId stream, std::uint64_t index) noexcept;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal (Box-Muller, second variate cached).
    double normal() noexcept;
    /// Rate-1 exponential.
    double exponential() noexcept;
    /// Standard Cauchy.
    double cauchy() noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace zerocorr
