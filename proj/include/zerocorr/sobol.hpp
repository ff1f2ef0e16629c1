#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace zerocorr {

/// Sobol' low-discrepancy points with Joe-Kuo direction numbers, 32-bit
/// resolution. Points are addressed by index (Gray-code order), so any
/// subrange can be generated independently.
class SobolSequence {
public:
    static constexpr int max_dimension = 16;

    explicit SobolSequence(int dimension);

    int dimension() const { return dim_; }

    /// Raw 32-bit coordinates of point `index`, XOR-ed with `shift`
    /// (a random digital shift; pass zeros for the plain sequence).
    void integer_point(std::uint64_t index, std::span<const std::uint32_t> shift,
                       std::span<std::uint32_t> out) const;

    /// Coordinates in the open unit cube (cell midpoints).
    void point(std::uint64_t index, std::span<const std::uint32_t> shift, std::span<double> out) const;

private:
    int dim_;
    std::vector<std::array<std::uint32_t, 32>> directions_;
};

} // namespace zerocorr
