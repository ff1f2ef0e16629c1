#include "zerocorr/density.hpp"

#include "zerocorr/error.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace zerocorr {

std::string_view to_string(DensityKind kind) {
    switch (kind) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::exponential: return "exponential";
    case DensityKind::tabulated: return "tabulated";
    }
    return "unknown";
}

bool Support::bounded() const {
    return std::isfinite(lo) && std::isfinite(hi);
}

CoefficientDensity CoefficientDensity::uniform(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw InputError("uniform density needs finite a < b");
    }
    CoefficientDensity d;
    d.kind_ = DensityKind::uniform;
    d.p0_ = a;
    d.p1_ = b;
    d.breaks_ = {a, b};
    return d;
}

CoefficientDensity CoefficientDensity::gaussian(double v) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InputError("gaussian density needs a finite standard deviation v > 0");
    }
    CoefficientDensity d;
    d.kind_ = DensityKind::gaussian;
    d.p0_ = v;
    return d;
}

CoefficientDensity CoefficientDensity::exponential(double scale) {
    if (!std::isfinite(scale) || !(scale > 0.0)) {
        throw InputError("exponential density needs a finite scale > 0");
    }
    CoefficientDensity d;
    d.kind_ = DensityKind::exponential;
    d.p0_ = scale;
    d.breaks_ = {0.0};
    return d;
}

CoefficientDensity CoefficientDensity::tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw InputError("tabulated density needs matching grid/values with at least two nodes");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(values[i]) || values[i] < 0.0) {
            throw InputError("tabulated density needs finite grid and nonnegative finite values");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InputError("tabulated grid must be strictly increasing");
        }
    }
    std::vector<double> cumulative(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    }
    const double total = cumulative.back();
    if (!(total > 0.0)) {
        throw InputError("tabulated density has zero mass");
    }
    for (double& v : values) v /= total;
    for (double& c : cumulative) c /= total;

    CoefficientDensity d;
    d.kind_ = DensityKind::tabulated;
    d.p0_ = grid.front();
    d.p1_ = grid.back();
    d.breaks_ = grid;
    d.grid_ = std::move(grid);
    d.values_ = std::move(values);
    d.cumulative_ = std::move(cumulative);
    return d;
}

double CoefficientDensity::operator()(double u) const noexcept {
    switch (kind_) {
    case DensityKind::uniform:
        return (u >= p0_ && u <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
    case DensityKind::gaussian: {
        const double z = u / p0_;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * p0_);
    }
    case DensityKind::exponential:
        return u >= 0.0 ? std::exp(-u / p0_) / p0_ : 0.0;
    case DensityKind::tabulated: {
        if (u < grid_.front() || u > grid_.back()) return 0.0;
        auto it = std::upper_bound(grid_.begin(), grid_.end(), u);
        if (it == grid_.end()) return values_.back();
        const auto i = static_cast<std::size_t>(it - grid_.begin());
        const double w = (u - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
        return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }
    }
    return 0.0;
}

double CoefficientDensity::sample(RandomStream& rng) const {
    switch (kind_) {
    case DensityKind::uniform:
        return p0_ + (p1_ - p0_) * rng.uniform();
    case DensityKind::gaussian:
        return p0_ * rng.normal();
    case DensityKind::exponential:
        return p0_ * rng.exponential();
    case DensityKind::tabulated: {
        const double r = rng.uniform();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        if (it == cumulative_.end()) return grid_.back();
        const auto i = static_cast<std::size_t>(it - cumulative_.begin());
        const double h = grid_[i] - grid_[i - 1];
        const double y0 = values_[i - 1];
        const double y1 = values_[i];
        const double target = r - cumulative_[i - 1];
        // Solve y0 s + (y1 - y0) s^2 / (2h) = target for s in [0, h].
        const double a = (y1 - y0) / (2.0 * h);
        const double disc = std::max(0.0, y0 * y0 + 4.0 * a * target);
        const double denom = y0 + std::sqrt(disc);
        const double s = denom > 0.0 ? 2.0 * target / denom : 0.0;
        return grid_[i - 1] + std::clamp(s, 0.0, h);
    }
    }
    return 0.0;
}

Support CoefficientDensity::support() const {
    switch (kind_) {
    case DensityKind::uniform:
    case DensityKind::tabulated:
        return {p0_, p1_};
    case DensityKind::gaussian:
        return {};
    case DensityKind::exponential:
        return {0.0, std::numeric_limits<double>::infinity()};
    }
    return {};
}

double CoefficientDensity::decay_radius(double eps) const {
    switch (kind_) {
    case DensityKind::uniform:
    case DensityKind::tabulated:
        // Compact support; the grid extent is the decay metadata of a table.
        return std::max(std::abs(p0_), std::abs(p1_));
    case DensityKind::gaussian:
        // 2 Phi(-R/v) = erfc(R / (v sqrt 2)) = eps
        return p0_ * std::numbers::sqrt2 * boost::math::erfc_inv(eps);
    case DensityKind::exponential:
        return -p0_ * std::log(eps);
    }
    return 0.0;
}

Support CoefficientDensity::truncated_support(double eps) const {
    const Support s = support();
    if (s.bounded()) return s;
    const double r = decay_radius(eps);
    return {std::max(s.lo, -r), std::min(s.hi, r)};
}

bool CoefficientDensity::is_standard_uniform() const {
    return kind_ == DensityKind::uniform && p0_ == -1.0 && p1_ == 1.0;
}

bool CoefficientDensity::is_standard_exponential() const {
    return kind_ == DensityKind::exponential && p0_ == 1.0;
}

double eval_density(const CoefficientDensity& d, double u) {
    if (!std::isfinite(u)) {
        throw InputError("density evaluated at a non-finite point");
    }
    return d(u);
}

double sample_coefficient(const CoefficientDensity& d, RandomStream& rng) {
    return d.sample(rng);
}

double decay_radius(const CoefficientDensity& d, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw InputError("decay_radius needs 0 < eps < 1");
    }
    return d.decay_radius(eps);
}

CoefficientModel::CoefficientModel(int degree, std::vector<CoefficientDensity> densities)
    : degree_(degree), densities_(std::move(densities)) {
    if (degree_ < 1) {
        throw InputError("polynomial degree must be at least 1");
    }
    if (densities_.size() != static_cast<std::size_t>(degree_) + 1) {
        throw InputError("model needs exactly degree + 1 coefficient densities, got " +
                         std::to_string(densities_.size()));
    }
}

CoefficientModel CoefficientModel::iid(int degree, const CoefficientDensity& d) {
    if (degree < 1) {
        throw InputError("polynomial degree must be at least 1");
    }
    return CoefficientModel(degree, std::vector<CoefficientDensity>(static_cast<std::size_t>(degree) + 1, d));
}

bool CoefficientModel::all_of_kind(DensityKind kind) const {
    return std::all_of(densities_.begin(), densities_.end(),
                       [kind](const CoefficientDensity& d) { return d.kind() == kind; });
}

bool CoefficientModel::all_standard_uniform() const {
    return std::all_of(densities_.begin(), densities_.end(),
                       [](const CoefficientDensity& d) { return d.is_standard_uniform(); });
}

bool CoefficientModel::all_standard_exponential() const {
    return std::all_of(densities_.begin(), densities_.end(),
                       [](const CoefficientDensity& d) { return d.is_standard_exponential(); });
}

} // namespace zerocorr
