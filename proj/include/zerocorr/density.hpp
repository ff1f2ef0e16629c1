#pragma once

#include "zerocorr/random.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace zerocorr {

enum class DensityKind { uniform, gaussian, exponential, tabulated };

std::string_view to_string(DensityKind kind);

/// Closed interval; either end may be infinite.
struct Support {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const;
};

/// Law of a single coefficient. Immutable value type.
///
/// - uniform(a, b): 1/(b-a) on [a, b]
/// - gaussian(v): centred normal with standard deviation v
/// - exponential(s): exp(-u/s)/s on [0, inf); s = 1 is the rate-1 law
/// - tabulated(grid, values): piecewise linear through (grid, values), zero
///   outside the grid, renormalised to unit mass
class CoefficientDensity {
public:
    static CoefficientDensity uniform(double a, double b);
    static CoefficientDensity gaussian(double v);
    static CoefficientDensity exponential(double scale = 1.0);
    static CoefficientDensity tabulated(std::vector<double> grid, std::vector<double> values);

    DensityKind kind() const { return kind_; }

    /// f(u); exactly 0 outside the support. Caller guarantees finite u.
    double operator()(double u) const noexcept;

    double sample(RandomStream& rng) const;
    Support support() const;
    /// R such that the mass outside [-R, R] is at most eps.
    double decay_radius(double eps) const;
    /// Support intersected with [-decay_radius(eps), decay_radius(eps)].
    Support truncated_support(double eps) const;

    /// Points inside the support where f is not continuous or not smooth.
    std::span<const double> breakpoints() const { return breaks_; }

    double lower() const { return p0_; }   // uniform a
    double upper() const { return p1_; }   // uniform b
    double sd() const { return p0_; }      // gaussian v
    double scale() const { return p0_; }   // exponential s
    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }

    bool is_standard_uniform() const;      // uniform(-1, 1)
    bool is_standard_exponential() const;  // rate 1

    friend bool operator==(const CoefficientDensity&, const CoefficientDensity&) = default;

private:
    CoefficientDensity() = default;

    DensityKind kind_ = DensityKind::uniform;
    double p0_ = 0.0;
    double p1_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
    std::vector<double> breaks_;
};

/// Pointwise evaluation; throws InputError for non-finite u.
double eval_density(const CoefficientDensity& d, double u);
double sample_coefficient(const CoefficientDensity& d, RandomStream& rng);
/// Throws InputError unless 0 < eps < 1.
double decay_radius(const CoefficientDensity& d, double eps);

/// Degree n together with the laws of xi_0 .. xi_n.
class CoefficientModel {
public:
    CoefficientModel(int degree, std::vector<CoefficientDensity> densities);
    static CoefficientModel iid(int degree, const CoefficientDensity& d);

    int degree() const { return degree_; }
    const CoefficientDensity& density(int i) const { return densities_[static_cast<std::size_t>(i)]; }
    std::span<const CoefficientDensity> densities() const { return densities_; }

    bool all_of_kind(DensityKind kind) const;
    bool all_standard_uniform() const;
    bool all_standard_exponential() const;

private:
    int degree_;
    std::vector<CoefficientDensity> densities_;
};

} // namespace zerocorr
