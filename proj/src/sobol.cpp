#include "zerocorr/sobol.hpp"

#include "zerocorr/error.hpp"

#include <string>

namespace zerocorr {

namespace {

struct Primitive {
    int degree;
    std::uint32_t coeffs;
    std::array<std::uint32_t, 8> m;
};

// new-joe-kuo-6.21201, dimensions 2..16.
constexpr std::array<Primitive, 15> kTable = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

} // namespace

SobolSequence::SobolSequence(int dimension) : dim_(dimension) {
    if (dimension < 1 || dimension > max_dimension) {
        throw InputError("Sobol dimension must be in [1, " + std::to_string(max_dimension) + "]");
    }
    directions_.resize(static_cast<std::size_t>(dimension));
    for (int b = 0; b < 32; ++b) {
        directions_[0][static_cast<std::size_t>(b)] = 1u << (31 - b);
    }
    for (int d = 1; d < dimension; ++d) {
        const Primitive& p = kTable[static_cast<std::size_t>(d - 1)];
        auto& v = directions_[static_cast<std::size_t>(d)];
        const int s = p.degree;
        for (int b = 0; b < s && b < 32; ++b) {
            v[static_cast<std::size_t>(b)] = p.m[static_cast<std::size_t>(b)] << (31 - b);
        }
        for (int b = s; b < 32; ++b) {
            std::uint32_t value = v[static_cast<std::size_t>(b - s)] ^ (v[static_cast<std::size_t>(b - s)] >> s);
            for (int k = 1; k < s; ++k) {
                if ((p.coeffs >> (s - 1 - k)) & 1u) {
                    value ^= v[static_cast<std::size_t>(b - k)];
                }
            }
            v[static_cast<std::size_t>(b)] = value;
        }
    }
}

void SobolSequence::integer_point(std::uint64_t index, std::span<const std::uint32_t> shift,
                                  std::span<std::uint32_t> out) const {
    const std::uint64_t gray = index ^ (index >> 1);
    for (int d = 0; d < dim_; ++d) {
        std::uint32_t x = shift.empty() ? 0u : shift[static_cast<std::size_t>(d)];
        const auto& v = directions_[static_cast<std::size_t>(d)];
        for (int b = 0; b < 32; ++b) {
            if ((gray >> b) & 1u) x ^= v[static_cast<std::size_t>(b)];
        }
        out[static_cast<std::size_t>(d)] = x;
    }
}

void SobolSequence::point(std::uint64_t index, std::span<const std::uint32_t> shift, std::span<double> out) const {
    std::array<std::uint32_t, max_dimension> raw{};
    integer_point(index, shift, std::span<std::uint32_t>(raw.data(), static_cast<std::size_t>(dim_)));
    for (int d = 0; d < dim_; ++d) {
        out[static_cast<std::size_t>(d)] = (static_cast<double>(raw[static_cast<std::size_t>(d)]) + 0.5) * 0x1.0p-32;
    }
}

} // namespace zerocorr
