#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace zerocorr {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 1000;
    /// Every knot interval starts as this many equal panels. Guards against
    /// kinks that sit just outside the outermost nodes of a coarse panel.
    std::size_t initial_splits = 1;
};

using Integrand1D = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. `knots` must be sorted
/// and hold at least two finite points; consecutive knots delimit the
/// initial panels, so discontinuities of f belong there. Bisection always
/// picks the panel with the largest error estimate (ties broken by position),
/// so the subdivision is a deterministic function of f.
QuadratureResult integrate_gk(const Integrand1D& f, std::span<const double> knots,
                              const QuadratureOptions& opts);

QuadratureResult integrate_gk(const Integrand1D& f, double a, double b, const QuadratureOptions& opts);

/// Integral over [lo, hi] where either end may be infinite, via x = tan(theta).
/// `knots` are extra interior break points in x.
QuadratureResult integrate_line(const Integrand1D& f, double lo, double hi, std::span<const double> knots,
                                const QuadratureOptions& opts);

} // namespace zerocorr
