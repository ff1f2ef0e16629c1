#include "zerocorr/closed_forms.hpp"

#include "zerocorr/error.hpp"
#include "zerocorr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>

namespace zerocorr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_full(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    if (cfg.m() != model.degree()) {
        throw DimensionError("closed forms need k + 2l = n; got " + std::to_string(cfg.m()) + " points for degree " +
                             std::to_string(model.degree()));
    }
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

std::string_view to_string(ClosedFormFamily f) {
    switch (f) {
    case ClosedFormFamily::uniform: return "uniform";
    case ClosedFormFamily::gaussian: return "gaussian";
    case ClosedFormFamily::exponential: return "exponential";
    }
    return "unknown";
}

std::optional<ClosedFormFamily> closed_form_family(const CoefficientModel& model) {
    if (model.all_standard_uniform()) return ClosedFormFamily::uniform;
    if (model.all_of_kind(DensityKind::gaussian)) return ClosedFormFamily::gaussian;
    if (model.all_standard_exponential()) return ClosedFormFamily::exponential;
    return std::nullopt;
}

JointDensityValue uniform_joint(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    if (!model.all_standard_uniform()) throw ModelMismatchError("uniform closed form needs uniform(-1, 1) coefficients");
    require_full(model, cfg);
    const int n = model.degree();
    const SymmetricProfile p = elementary_symmetric(cfg);
    double mx = 0.0;
    for (double s : p.sigma) mx = std::max(mx, std::abs(s));
    JointDensityValue r;
    r.family = ClosedFormFamily::uniform;
    if (p.vandermonde == 0.0) return r;
    r.value = std::ldexp(1.0, cfg.l() - n) / (n + 1) * p.vandermonde / std::pow(mx, n + 1);
    return r;
}

JointDensityValue gaussian_joint(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    if (!model.all_of_kind(DensityKind::gaussian)) throw ModelMismatchError("gaussian closed form needs gaussian coefficients");
    require_full(model, cfg);
    const int n = model.degree();
    const SymmetricProfile p = elementary_symmetric(cfg);
    JointDensityValue r;
    r.family = ClosedFormFamily::gaussian;
    if (p.vandermonde == 0.0) return r;
    double a = 0.0;
    double log_sd = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double v = model.density(i).sd();
        const double s = p.at(n - i) / v;
        a += s * s;
        log_sd += std::log(v);
    }
    const double h = 0.5 * (n + 1);
    const double log_value = cfg.l() * std::numbers::ln2 + std::log(p.vandermonde) + std::lgamma(h) - h * std::log(a) -
                             h * std::log(std::numbers::pi) - log_sd;
    r.value = std::exp(log_value);
    return r;
}

JointDensityValue exponential_joint(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    if (!model.all_standard_exponential()) {
        throw ModelMismatchError("exponential closed form needs rate-1 exponential coefficients");
    }
    require_full(model, cfg);
    const int n = model.degree();
    const SymmetricProfile p = elementary_symmetric(cfg);
    JointDensityValue r;
    r.family = ClosedFormFamily::exponential;
    for (int i = 0; i <= n; ++i) {
        const double signed_sigma = (i % 2 == 0) ? p.at(i) : -p.at(i);
        if (signed_sigma < 0.0) {
            r.indicator = false;
            return r;
        }
    }
    if (p.vandermonde == 0.0) return r;
    const std::vector<cplx> tuple = cfg.full_tuple();
    const double denom = product_one_minus(tuple).real();
    const double log_value = cfg.l() * std::numbers::ln2 + log_factorial(n) + std::log(p.vandermonde) -
                             (n + 1) * std::log(denom);
    r.value = std::exp(log_value);
    return r;
}

JointDensityValue joint_density(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    const auto family = closed_form_family(model);
    if (!family) throw ModelMismatchError("no closed form for this coefficient model");
    switch (*family) {
    case ClosedFormFamily::uniform: return uniform_joint(model, cfg);
    case ClosedFormFamily::gaussian: return gaussian_joint(model, cfg);
    case ClosedFormFamily::exponential: return exponential_joint(model, cfg);
    }
    throw ModelMismatchError("no closed form for this coefficient model");
}

double gaussian_quoted_constant_ratio(int n) {
    return std::pow(2.0, 0.5 * (1 - n)) * std::sqrt(std::numbers::pi);
}

// ---------------------------------------------------------------------------

namespace {

using PointFunction = std::function<double(const ZeroConfiguration&)>;

// Nested quadrature over x_1 < .. < x_k and z_1 .. z_l in the upper half-plane.
QuadratureResult integrate_configurations(int k, int l, const PointFunction& g, double tolerance) {
    static constexpr std::array<double, 3> kKnots{-1.0, 0.0, 1.0};
    const std::size_t dims = static_cast<std::size_t>(k + 2 * l);
    std::vector<double> v(dims, 0.0);
    std::function<QuadratureResult(std::size_t)> level = [&](std::size_t c) -> QuadratureResult {
        double lo = -kInf;
        double hi = kInf;
        std::span<const double> knots = kKnots;
        if (c < static_cast<std::size_t>(k)) {
            if (c > 0) lo = v[c - 1];
        } else if ((c - static_cast<std::size_t>(k)) % 2 == 1) {
            // imaginary parts: a knot at 1 would sit on the tangency of the
            // unit circle, which hides nearby kinks from the error estimate
            lo = 0.0;
            knots = {};
        }
        QuadratureOptions opts;
        opts.rel_tol = c == 0 ? tolerance : std::max(1e-13, 0.1 * tolerance);
        opts.max_intervals = c == 0 ? 400 : 200;
        const Integrand1D f = [&, c](double u) {
            v[c] = u;
            if (c + 1 < dims) return level(c + 1).value;
            std::vector<double> xs(v.begin(), v.begin() + k);
            std::vector<cplx> zs;
            for (int p = 0; p < l; ++p) {
                zs.emplace_back(v[static_cast<std::size_t>(k + 2 * p)], v[static_cast<std::size_t>(k + 2 * p + 1)]);
            }
            return g(ZeroConfiguration(std::move(xs), std::move(zs)));
        };
        return integrate_line(f, lo, hi, knots, opts);
    };
    return level(0);
}

} // namespace

IntegralEstimate prob_real_count(const CoefficientModel& model, int l, const BackendSettings& settings) {
    const int n = model.degree();
    if (l < 0 || 2 * l > n) {
        throw DomainError("number of complex pairs must satisfy 0 <= 2l <= n; got l = " + std::to_string(l));
    }
    const int k = n - 2 * l;
    const double norm = std::exp(-log_factorial(l) - log_factorial(k));
    const auto family = closed_form_family(model);

    if (settings.backend == Backend::adaptive && n <= 3 && (family || l == 0)) {
        std::uint64_t effort = 0;
        BackendSettings inner = settings;
        inner.tolerance = std::max(1e-13, 0.1 * settings.tolerance);
        const PointFunction g = [&](const ZeroConfiguration& cfg) {
            ++effort;
            if (family) return joint_density(model, cfg).value;
            return rho_kl(model, cfg, inner).value;
        };
        const QuadratureResult r = integrate_configurations(k, l, g, settings.tolerance);
        IntegralEstimate e;
        e.backend = Backend::adaptive;
        // ordered reals already account for the 1/k!
        e.value = r.value * std::exp(-log_factorial(l));
        e.error = r.error * std::exp(-log_factorial(l));
        e.effort = effort;
        return e;
    }

    if (settings.backend == Backend::quasi_random) {
        throw BackendUnavailableError("quasi_random backend does not integrate over configuration space");
    }
    BackendSettings mc = settings;
    mc.backend = Backend::monte_carlo;
    const std::vector<Interval> reals(static_cast<std::size_t>(k), Interval{-kInf, kInf});
    const std::vector<Rectangle> pairs(static_cast<std::size_t>(l), Rectangle{-kInf, kInf, 0.0, kInf});
    IntegralEstimate e = integrate_correlation(model, reals, pairs, mc);
    e.value *= norm;
    e.error *= norm;
    return e;
}

} // namespace zerocorr
