#include "zerocorr/engine.hpp"

#include "zerocorr/error.hpp"
#include "zerocorr/parallel.hpp"
#include "zerocorr/quadrature.hpp"
#include "zerocorr/random.hpp"
#include "zerocorr/simplex.hpp"
#include "zerocorr/sobol.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace zerocorr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

IntegralEstimate finish(IntegralEstimate e) {
    if (e.value < 0.0) {
        e.clamped = -e.value;
        e.value = 0.0;
    }
    return e;
}

} // namespace

std::string_view to_string(Backend b) {
    switch (b) {
    case Backend::adaptive: return "adaptive";
    case Backend::monte_carlo: return "monte_carlo";
    case Backend::quasi_random: return "quasi_random";
    }
    return "unknown";
}

Backend backend_from_string(std::string_view name) {
    if (name == "adaptive") return Backend::adaptive;
    if (name == "monte_carlo") return Backend::monte_carlo;
    if (name == "quasi_random") return Backend::quasi_random;
    throw InputError("unknown backend '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// IntegrandSpec

IntegrandSpec::IntegrandSpec(CoefficientModel model, Eigen::MatrixXd map, std::vector<double> reals,
                             std::vector<cplx> pairs, double prefactor, int m)
    : model_(std::move(model)), map_(std::move(map)), reals_(std::move(reals)), pairs_(std::move(pairs)),
      prefactor_(prefactor), m_(m) {
    index_rows();
}

IntegrandSpec::IntegrandSpec(const CoefficientModel& model, const ZeroConfiguration& cfg)
    : model_(model), prefactor_(0.0), m_(cfg.m()) {
    const CoefficientMap map = coefficient_map(cfg, model.degree());
    map_ = map.matrix();
    reals_.assign(cfg.real_points().begin(), cfg.real_points().end());
    pairs_.assign(cfg.complex_points().begin(), cfg.complex_points().end());
    prefactor_ = vandermonde_modulus(cfg.full_tuple());
    index_rows();
}

IntegrandSpec IntegrandSpec::real_banded(const CoefficientModel& model, double x) {
    if (!std::isfinite(x)) throw InputError("non-finite real point");
    const int n = model.degree();
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n + 1, n);
    for (int i = 0; i <= n; ++i) {
        if (i - 1 >= 0) map(i, i - 1) = 1.0;
        if (i < n) map(i, i) = -x;
    }
    return IntegrandSpec(model, std::move(map), {x}, {}, 1.0, 1);
}

IntegrandSpec IntegrandSpec::complex_banded(const CoefficientModel& model, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("non-finite complex point");
    if (!(z.imag() > 0.0)) throw DomainError("complex point must lie in the open upper half-plane");
    const int n = model.degree();
    if (n < 2) throw DimensionError("a degree-1 polynomial has no complex zeros");
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n + 1, n - 1);
    const double two_re = 2.0 * z.real();
    const double mod2 = std::norm(z);
    for (int i = 0; i <= n; ++i) {
        if (i - 2 >= 0 && i - 2 < n - 1) map(i, i - 2) = 1.0;
        if (i - 1 >= 0 && i - 1 < n - 1) map(i, i - 1) = -two_re;
        if (i < n - 1) map(i, i) = mod2;
    }
    return IntegrandSpec(model, std::move(map), {}, {z}, 2.0 * z.imag(), 2);
}

void IntegrandSpec::index_rows() {
    const int rows = static_cast<int>(map_.rows());
    const int cols = static_cast<int>(map_.cols());
    first_.assign(static_cast<std::size_t>(rows), cols);
    last_.assign(static_cast<std::size_t>(rows), -1);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (map_(i, j) != 0.0) {
                first_[static_cast<std::size_t>(i)] = std::min(first_[static_cast<std::size_t>(i)], j);
                last_[static_cast<std::size_t>(i)] = j;
            }
        }
    }
}

double IntegrandSpec::coefficient(int i, std::span<const double> t) const {
    double c = 0.0;
    for (int j = row_first(i); j <= row_last(i); ++j) c += map_(i, j) * t[static_cast<std::size_t>(j)];
    return c;
}

double IntegrandSpec::polynomial_factor(std::span<const double> t) const {
    const int d = dimension();
    double prod = 1.0;
    for (double x : reals_) {
        double q = t[static_cast<std::size_t>(d - 1)];
        for (int j = d - 2; j >= 0; --j) q = q * x + t[static_cast<std::size_t>(j)];
        prod *= std::abs(q);
    }
    for (cplx z : pairs_) {
        cplx q = t[static_cast<std::size_t>(d - 1)];
        for (int j = d - 2; j >= 0; --j) q = q * z + t[static_cast<std::size_t>(j)];
        prod *= std::norm(q);
    }
    return prod;
}

double IntegrandSpec::operator()(std::span<const double> t) const {
    double prod = 1.0;
    for (int i = 0; i <= degree(); ++i) {
        const double f = model_.density(i)(coefficient(i, t));
        if (f == 0.0) return 0.0;
        prod *= f;
    }
    return prod * polynomial_factor(t);
}

double integrand(const IntegrandSpec& spec, std::span<const double> t) {
    if (static_cast<int>(t.size()) != spec.dimension()) {
        throw InputError("integrand point has dimension " + std::to_string(t.size()) + ", expected " +
                         std::to_string(spec.dimension()));
    }
    for (double v : t) {
        if (!std::isfinite(v)) throw InputError("integrand evaluated at a non-finite point");
    }
    return spec(t);
}

// ---------------------------------------------------------------------------
// Adaptive backend

namespace {

// Integrates t_{d-1} outermost. At level j the rows whose first nonzero
// column is j depend only on t_j and the already fixed outer coordinates, so
// each of them cuts the range of t_j to an interval and contributes the
// images of its density's break points as knots. The unit-triangular block
// guarantees at least one such row per level.
class NestedQuadrature {
public:
    NestedQuadrature(const IntegrandSpec& spec, const BackendSettings& settings)
        : spec_(spec), settings_(settings), t_(static_cast<std::size_t>(spec.dimension()), 0.0) {
        const int d = spec.dimension();
        rows_at_.resize(static_cast<std::size_t>(d));
        for (int i = 0; i <= spec.degree(); ++i) {
            supports_.push_back(spec.model().density(i).truncated_support(settings.truncation_eps));
            const int first = spec.row_first(i);
            if (first < d) rows_at_[static_cast<std::size_t>(first)].push_back(i);
        }
    }

    QuadratureResult run() { return level(spec_.dimension() - 1); }
    std::uint64_t evaluations() const { return evaluations_; }

private:
    QuadratureResult level(int j) {
        double lo = -kInf;
        double hi = kInf;
        std::vector<double> knots;
        for (int i : rows_at_[static_cast<std::size_t>(j)]) {
            const double a = spec_.map()(i, j);
            double b = 0.0;
            for (int c = j + 1; c <= spec_.row_last(i); ++c) b += spec_.map()(i, c) * t_[static_cast<std::size_t>(c)];
            const Support s = supports_[static_cast<std::size_t>(i)];
            double u1 = (s.lo - b) / a;
            double u2 = (s.hi - b) / a;
            if (a < 0.0) std::swap(u1, u2);
            lo = std::max(lo, u1);
            hi = std::min(hi, u2);
            for (double brk : spec_.model().density(i).breakpoints()) {
                if (brk > s.lo && brk < s.hi) knots.push_back((brk - b) / a);
            }
        }
        if (j == 0) {
            const int d = spec_.dimension();
            for (double x : spec_.real_points()) {
                double rest = 0.0;
                double p = 1.0;
                for (int c = 1; c < d; ++c) {
                    p *= x;
                    rest += t_[static_cast<std::size_t>(c)] * p;
                }
                knots.push_back(-rest);
            }
        }
        if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return {};

        std::vector<double> all{lo, hi};
        for (double k : knots) {
            if (k > lo && k < hi) all.push_back(k);
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());

        const bool outer = j == spec_.dimension() - 1;
        QuadratureOptions opts;
        opts.rel_tol = outer ? settings_.tolerance : std::max(1e-13, 0.1 * settings_.tolerance);
        opts.abs_tol = 0.0;
        opts.max_intervals = outer ? (spec_.dimension() == 1 ? 2000 : 400) : 200;

        const Integrand1D f = [this, j](double u) {
            t_[static_cast<std::size_t>(j)] = u;
            if (j == 0) {
                ++evaluations_;
                return spec_(t_);
            }
            return level(j - 1).value;
        };
        return integrate_gk(f, all, opts);
    }

    const IntegrandSpec& spec_;
    const BackendSettings& settings_;
    std::vector<double> t_;
    std::vector<Support> supports_;
    std::vector<std::vector<int>> rows_at_;
    std::uint64_t evaluations_ = 0;
};

} // namespace

IntegralEstimate integrate_adaptive(const IntegrandSpec& spec, const BackendSettings& settings) {
    const int d = spec.dimension();
    if (d > settings.adaptive_cutoff) {
        throw BackendUnavailableError("integral dimension " + std::to_string(d) + " exceeds the adaptive cutoff " +
                                      std::to_string(settings.adaptive_cutoff) + "; use the monte_carlo backend");
    }
    NestedQuadrature nq(spec, settings);
    const QuadratureResult r = nq.run();
    double tail = 0.0;
    for (const CoefficientDensity& dens : spec.model().densities()) {
        if (!dens.support().bounded()) tail += settings.truncation_eps;
    }
    IntegralEstimate e;
    e.backend = Backend::adaptive;
    e.value = r.value;
    e.error = r.error + std::abs(r.value) * tail;
    e.effort = nq.evaluations();
    return e;
}

// ---------------------------------------------------------------------------
// Polytope

bool FeasiblePolytope::contains(const Eigen::VectorXd& t, double tol) const {
    if (empty) return false;
    const Eigen::VectorXd c = map * t;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double slack = tol * std::max(1.0, std::max(std::abs(lo(i)), std::abs(hi(i))));
        if (c(i) < lo(i) - slack || c(i) > hi(i) + slack) return false;
    }
    return true;
}

double FeasiblePolytope::box_volume() const {
    if (empty) return 0.0;
    return (box_hi - box_lo).prod();
}

FeasiblePolytope build_polytope(const IntegrandSpec& spec) {
    if (!spec.model().all_of_kind(DensityKind::uniform)) {
        throw ModelMismatchError("polytope domains need uniform coefficient laws");
    }
    const int n = spec.degree();
    const int d = spec.dimension();
    FeasiblePolytope p;
    p.map = spec.map();
    p.lo.resize(n + 1);
    p.hi.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        p.lo(i) = spec.model().density(i).lower();
        p.hi(i) = spec.model().density(i).upper();
    }
    p.box_lo.resize(d);
    p.box_hi.resize(d);
    for (int j = 0; j < d; ++j) {
        for (int sense : {-1, 1}) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
            c(j) = sense;
            const LpResult r = maximize_free(p.map, p.lo, p.hi, c);
            if (r.status == LpStatus::infeasible) {
                p.empty = true;
                p.box_lo.setZero();
                p.box_hi.setZero();
                return p;
            }
            if (r.status == LpStatus::unbounded) {
                throw GeometryError("polytope is unbounded along t_" + std::to_string(j));
            }
            if (sense < 0) {
                p.box_lo(j) = -r.objective;
            } else {
                p.box_hi(j) = r.objective;
            }
            p.extreme_points.push_back(r.x);
        }
        const double scale = std::max({1.0, std::abs(p.box_lo(j)), std::abs(p.box_hi(j))});
        if (p.box_hi(j) - p.box_lo(j) <= 1e-12 * scale) p.empty = true;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Monte Carlo proposals

namespace {

// True when {t : (M t)_i inside supp f_i} has empty interior, i.e. the
// t-integral vanishes identically.
bool support_degenerate(const IntegrandSpec& spec) {
    const int n = spec.degree();
    const int d = spec.dimension();
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (int i = 0; i <= n; ++i) {
        const Support s = spec.model().density(i).support();
        Eigen::VectorXd g = spec.map().row(i).transpose();
        const double scale = g.cwiseAbs().maxCoeff();
        if (scale == 0.0) {
            if (spec.model().density(i)(0.0) == 0.0) return true;
            continue;
        }
        g /= scale;
        if (std::isfinite(s.hi)) {
            Eigen::VectorXd r(2 * d + 1);
            r << g, -g, 1.0;
            rows.push_back(r);
            rhs.push_back(s.hi / scale);
        }
        if (std::isfinite(s.lo)) {
            Eigen::VectorXd r(2 * d + 1);
            r << -g, g, 1.0;
            rows.push_back(r);
            rhs.push_back(-s.lo / scale);
        }
    }
    if (rows.empty()) return false;
    Eigen::VectorXd cap = Eigen::VectorXd::Zero(2 * d + 1);
    cap(2 * d) = 1.0;
    rows.push_back(cap);
    rhs.push_back(1.0);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 2 * d + 1);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
        b(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    const LpResult r = simplex_maximize(a, b, cap);
    return r.status == LpStatus::infeasible || (r.status == LpStatus::optimal && r.objective <= 1e-12);
}

// One-draw importance sampler for the t-integral of a fixed configuration.
class Proposal {
public:
    enum class Kind { gaussian, box, top_block, empty };

    explicit Proposal(const IntegrandSpec& spec) : spec_(spec) {
        const CoefficientModel& model = spec.model();
        if (model.all_of_kind(DensityKind::gaussian)) {
            init_gaussian();
        } else if (model.all_of_kind(DensityKind::uniform)) {
            init_box();
        } else {
            init_top_block();
        }
    }

    Kind kind() const { return kind_; }

    /// integrand(t) / q(t) for t ~ q.
    double draw(RandomStream& rng, std::span<double> t) const {
        const int d = spec_.dimension();
        switch (kind_) {
        case Kind::empty:
            return 0.0;
        case Kind::gaussian: {
            Eigen::VectorXd g(d);
            for (int j = 0; j < d; ++j) g(j) = rng.normal();
            return gaussian_weight(g, t);
        }
        case Kind::box: {
            for (int j = 0; j < d; ++j) {
                t[static_cast<std::size_t>(j)] = box_lo_(j) + (box_hi_(j) - box_lo_(j)) * rng.uniform();
            }
            return volume_ * spec_(t);
        }
        case Kind::top_block: {
            std::array<double, 64> s{};
            double log_ratio = 0.0;
            const int m = spec_.m();
            for (int r = 0; r < d; ++r) {
                const CoefficientDensity& f = spec_.model().density(m + r);
                if (tilt_.empty()) {
                    s[static_cast<std::size_t>(r)] = f.sample(rng);
                } else {
                    const double lambda = tilt_[static_cast<std::size_t>(r)];
                    const double v = rng.exponential() / lambda;
                    s[static_cast<std::size_t>(r)] = v;
                    log_ratio += (lambda - 1.0) * v - std::log(lambda);
                }
            }
            // back-substitution through the unit upper-triangular block
            for (int r = d - 1; r >= 0; --r) {
                double v = s[static_cast<std::size_t>(r)];
                for (int j = r + 1; j <= spec_.row_last(m + r); ++j) {
                    v -= spec_.map()(m + r, j) * t[static_cast<std::size_t>(j)];
                }
                t[static_cast<std::size_t>(r)] = v;
            }
            double log_w = log_ratio;
            for (int i = 0; i < m; ++i) {
                const double f = spec_.model().density(i)(spec_.coefficient(i, t));
                if (f == 0.0) return 0.0;
                log_w += std::log(f);
            }
            return std::exp(log_w) * spec_.polynomial_factor(t);
        }
        }
        return 0.0;
    }

    /// Gaussian proposal driven by externally supplied standard normals.
    double gaussian_weight(const Eigen::VectorXd& g, std::span<double> t) const {
        const Eigen::VectorXd tv = upper_.triangularView<Eigen::Upper>().solve(g);
        for (Eigen::Index j = 0; j < tv.size(); ++j) t[static_cast<std::size_t>(j)] = tv(j);
        return std::exp(log_const_) * spec_.polynomial_factor(t);
    }

private:
    void init_gaussian() {
        kind_ = Kind::gaussian;
        const int n = spec_.degree();
        const int d = spec_.dimension();
        Eigen::VectorXd w(n + 1);
        double log_c = -0.5 * (n + 1) * kLog2Pi;
        for (int i = 0; i <= n; ++i) {
            const double v = spec_.model().density(i).sd();
            w(i) = 1.0 / (v * v);
            log_c -= std::log(v);
        }
        const Eigen::MatrixXd precision = spec_.map().transpose() * w.asDiagonal() * spec_.map();
        Eigen::LLT<Eigen::MatrixXd> llt(precision);
        if (llt.info() != Eigen::Success) {
            throw DiagnosticsError("gaussian proposal: precision matrix is not positive definite");
        }
        upper_ = llt.matrixU();
        double log_sqrt_det = 0.0;
        for (int j = 0; j < d; ++j) log_sqrt_det += std::log(upper_(j, j));
        // integrand / q = C (2 pi)^{d/2} det(P)^{-1/2} * polynomial factor
        log_const_ = log_c + 0.5 * d * kLog2Pi - log_sqrt_det;
    }

    void init_box() {
        const FeasiblePolytope p = [&] {
            try {
                return build_polytope(spec_);
            } catch (const GeometryError&) {
                FeasiblePolytope bad;
                bad.box_lo = Eigen::VectorXd::Constant(1, kInf);
                return bad;
            }
        }();
        if (p.empty) {
            kind_ = Kind::empty;
            return;
        }
        if (!p.box_lo.allFinite() || !p.box_hi.allFinite() || !std::isfinite(p.box_volume())) {
            init_top_block();
            return;
        }
        kind_ = Kind::box;
        box_lo_ = p.box_lo;
        box_hi_ = p.box_hi;
        volume_ = p.box_volume();
    }

    void init_top_block() {
        kind_ = Kind::top_block;
        const int d = spec_.dimension();
        if (d > 64) throw BackendUnavailableError("top-block proposal supports at most 64 dimensions");
        if (!spec_.model().all_standard_exponential()) return;
        // Exponential tilt: sum_i xi_i = S sum_j t_j = S w's with w = M_top^{-T} 1.
        const double s_total = spec_.map().col(0).sum();
        const Eigen::MatrixXd top = spec_.map().bottomRows(d);
        const Eigen::VectorXd w =
            top.transpose().triangularView<Eigen::Lower>().solve(Eigen::VectorXd::Ones(d));
        std::vector<double> lambda(static_cast<std::size_t>(d));
        for (int r = 0; r < d; ++r) {
            lambda[static_cast<std::size_t>(r)] = s_total * w(r);
            if (!(lambda[static_cast<std::size_t>(r)] > 0.0) || !std::isfinite(lambda[static_cast<std::size_t>(r)])) {
                return;
            }
        }
        tilt_ = std::move(lambda);
    }

    const IntegrandSpec& spec_;
    Kind kind_ = Kind::empty;
    Eigen::MatrixXd upper_;
    double log_const_ = 0.0;
    Eigen::VectorXd box_lo_;
    Eigen::VectorXd box_hi_;
    double volume_ = 0.0;
    std::vector<double> tilt_;
};

} // namespace

IntegralEstimate integrate_monte_carlo(const IntegrandSpec& spec, const BackendSettings& settings) {
    if (settings.samples < 1000) {
        throw InputError("monte_carlo backend needs at least 1000 samples");
    }
    const Proposal proposal(spec);
    IntegralEstimate e;
    e.backend = Backend::monte_carlo;
    if (proposal.kind() == Proposal::Kind::empty) return e;

    const int d = spec.dimension();
    auto chunks = run_chunks<MomentAccumulator>(
        settings.samples, resolve_workers(settings.workers),
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            MomentAccumulator acc;
            std::vector<double> t(static_cast<std::size_t>(d));
            for (std::uint64_t i = begin; i < end; ++i) {
                RandomStream rng(settings.seed, StreamId::engine_monte_carlo, i);
                acc.add(proposal.draw(rng, t));
            }
            return acc;
        });
    MomentAccumulator total;
    for (const auto& c : chunks) total.merge(c);
    if (total.nonzero == 0) {
        if (support_degenerate(spec)) return e;
        throw DiagnosticsError("monte_carlo proposal produced no sample inside the support (" +
                               std::to_string(total.count) + " trials)");
    }
    e.value = total.mean();
    e.error = total.std_error();
    e.effort = total.count;
    return finish(e);
}

IntegralEstimate integrate_quasi_random(const IntegrandSpec& spec, const BackendSettings& settings) {
    if (!spec.model().all_of_kind(DensityKind::gaussian)) {
        throw BackendUnavailableError("quasi_random backend supports gaussian models only");
    }
    const int d = spec.dimension();
    if (d > SobolSequence::max_dimension) {
        throw BackendUnavailableError("quasi_random backend supports at most " +
                                      std::to_string(SobolSequence::max_dimension) + " dimensions");
    }
    const int replicates = std::max(2, settings.qmc_replicates);
    const std::uint64_t per = std::max<std::uint64_t>(1, settings.samples / static_cast<std::uint64_t>(replicates));
    const Proposal proposal(spec);
    const SobolSequence sobol(d);
    MomentAccumulator across;
    for (int r = 0; r < replicates; ++r) {
        RandomStream shift_rng(settings.seed, StreamId::engine_quasi_shift, static_cast<std::uint64_t>(r));
        std::vector<std::uint32_t> shift(static_cast<std::size_t>(d));
        for (auto& s : shift) s = static_cast<std::uint32_t>(shift_rng.next_u64() >> 32);
        auto chunks = run_chunks<double>(per, resolve_workers(settings.workers),
                                         [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                                             std::vector<double> u(static_cast<std::size_t>(d));
                                             std::vector<double> t(static_cast<std::size_t>(d));
                                             Eigen::VectorXd g(d);
                                             double sum = 0.0;
                                             for (std::uint64_t i = begin; i < end; ++i) {
                                                 sobol.point(i, shift, u);
                                                 for (int j = 0; j < d; ++j) {
                                                     g(j) = -std::numbers::sqrt2 *
                                                            boost::math::erfc_inv(2.0 * u[static_cast<std::size_t>(j)]);
                                                 }
                                                 sum += proposal.gaussian_weight(g, t);
                                             }
                                             return sum;
                                         });
        double sum = 0.0;
        for (double c : chunks) sum += c;
        across.add(sum / static_cast<double>(per));
    }
    IntegralEstimate e;
    e.backend = Backend::quasi_random;
    e.value = across.mean();
    e.error = across.std_error();
    e.effort = per * static_cast<std::uint64_t>(replicates);
    return finish(e);
}

IntegralEstimate integrate(const IntegrandSpec& spec, const BackendSettings& settings) {
    switch (settings.backend) {
    case Backend::adaptive: return finish(integrate_adaptive(spec, settings));
    case Backend::monte_carlo: return integrate_monte_carlo(spec, settings);
    case Backend::quasi_random: return integrate_quasi_random(spec, settings);
    }
    throw InputError("unknown backend");
}

// ---------------------------------------------------------------------------
// Correlation functions

namespace {

IntegralEstimate scaled(IntegralEstimate e, double factor) {
    e.value *= factor;
    e.error *= factor;
    e.clamped *= factor;
    return e;
}

} // namespace

IntegralEstimate rho_m(const CoefficientModel& model, const ZeroConfiguration& cfg, const BackendSettings& settings) {
    const IntegrandSpec spec(model, cfg);
    if (spec.prefactor() == 0.0) {
        IntegralEstimate e;
        e.backend = settings.backend;
        return e;
    }
    return scaled(integrate(spec, settings), spec.prefactor());
}

IntegralEstimate rho_kl(const CoefficientModel& model, const ZeroConfiguration& cfg, const BackendSettings& settings) {
    for (cplx z : cfg.complex_points()) {
        if (!(z.imag() > 0.0)) throw DomainError("complex points must lie in the open upper half-plane");
    }
    return scaled(rho_m(model, cfg, settings), std::ldexp(1.0, cfg.l()));
}

IntegralEstimate rho_real_density(const CoefficientModel& model, double x, const BackendSettings& settings) {
    return integrate(IntegrandSpec::real_banded(model, x), settings);
}

IntegralEstimate rho_complex_density(const CoefficientModel& model, cplx z, const BackendSettings& settings) {
    if (!(z.imag() > 0.0)) throw DomainError("complex point must lie in the open upper half-plane");
    if (model.degree() < 2) {
        IntegralEstimate e;
        e.backend = settings.backend;
        return e;
    }
    const IntegrandSpec spec = IntegrandSpec::complex_banded(model, z);
    return scaled(integrate(spec, settings), 2.0 * spec.prefactor());
}

// ---------------------------------------------------------------------------
// Integrals of rho_{k,l} over product sets

namespace {

struct Coordinate {
    double lo;
    double hi;
};

void check_sets(std::span<const Interval> real_sets, std::span<const Rectangle> complex_sets) {
    for (const Interval& iv : real_sets) {
        if (!(iv.lo < iv.hi)) throw InputError("real set needs lo < hi");
    }
    for (const Rectangle& r : complex_sets) {
        if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi)) throw InputError("rectangle needs lo < hi on both axes");
        if (r.im_lo < 0.0) throw DomainError("rectangles must lie in the closed upper half-plane");
    }
}

// Draws a coordinate for the configuration proposal and returns its density.
double draw_coordinate(const Coordinate& c, RandomStream& rng, double& x) {
    const bool lo_fin = std::isfinite(c.lo);
    const bool hi_fin = std::isfinite(c.hi);
    if (lo_fin && hi_fin) {
        x = c.lo + (c.hi - c.lo) * rng.uniform();
        return 1.0 / (c.hi - c.lo);
    }
    const double y = rng.cauchy();
    if (!lo_fin && !hi_fin) {
        x = y;
        return 1.0 / (std::numbers::pi * (1.0 + y * y));
    }
    const double a = std::abs(y);
    x = lo_fin ? c.lo + a : c.hi - a;
    return 2.0 / (std::numbers::pi * (1.0 + a * a));
}

QuadratureResult integrate_coordinate(const Integrand1D& f, const Coordinate& c, const QuadratureOptions& opts) {
    static constexpr std::array<double, 3> kKnots{-1.0, 0.0, 1.0};
    if (std::isfinite(c.lo) && std::isfinite(c.hi)) {
        std::vector<double> knots{c.lo};
        for (double k : kKnots) {
            if (k > c.lo && k < c.hi) knots.push_back(k);
        }
        knots.push_back(c.hi);
        return integrate_gk(f, knots, opts);
    }
    return integrate_line(f, c.lo, c.hi, kKnots, opts);
}

ZeroConfiguration configuration_from(std::span<const double> v, int k, int l) {
    std::vector<double> xs(v.begin(), v.begin() + k);
    std::vector<cplx> zs;
    for (int p = 0; p < l; ++p) {
        zs.emplace_back(v[static_cast<std::size_t>(k + 2 * p)], v[static_cast<std::size_t>(k + 2 * p + 1)]);
    }
    return ZeroConfiguration(std::move(xs), std::move(zs));
}

} // namespace

IntegralEstimate integrate_correlation(const CoefficientModel& model, std::span<const Interval> real_sets,
                                       std::span<const Rectangle> complex_sets, const BackendSettings& settings) {
    check_sets(real_sets, complex_sets);
    const int k = static_cast<int>(real_sets.size());
    const int l = static_cast<int>(complex_sets.size());
    const int m = k + 2 * l;
    if (m == 0) throw InputError("at least one set is required");
    if (m > model.degree()) {
        throw DimensionError("k + 2l = " + std::to_string(m) + " exceeds degree " + std::to_string(model.degree()));
    }
    std::vector<Coordinate> coords;
    for (const Interval& iv : real_sets) coords.push_back({iv.lo, iv.hi});
    for (const Rectangle& r : complex_sets) {
        coords.push_back({r.re_lo, r.re_hi});
        coords.push_back({r.im_lo, r.im_hi});
    }
    const double two_l = std::ldexp(1.0, l);

    if (settings.backend == Backend::adaptive) {
        if (m > 2) {
            throw BackendUnavailableError("adaptive integration over configuration space supports k + 2l <= 2");
        }
        BackendSettings inner = settings;
        inner.tolerance = std::max(1e-13, 0.1 * settings.tolerance);
        std::vector<double> v(coords.size(), 0.0);
        std::uint64_t effort = 0;
        QuadratureOptions opts;
        opts.rel_tol = settings.tolerance;
        opts.max_intervals = 200;
        std::function<QuadratureResult(std::size_t)> level = [&](std::size_t c) -> QuadratureResult {
            const Integrand1D f = [&, c](double u) {
                v[c] = u;
                if (c + 1 < coords.size()) return level(c + 1).value;
                const auto cfg = configuration_from(v, k, l);
                const IntegralEstimate r = rho_kl(model, cfg, inner);
                effort += r.effort;
                return r.value;
            };
            return integrate_coordinate(f, coords[c], opts);
        };
        const QuadratureResult r = level(0);
        IntegralEstimate e;
        e.backend = Backend::adaptive;
        e.value = r.value;
        e.error = r.error;
        e.effort = effort;
        return finish(e);
    }
    if (settings.backend == Backend::quasi_random) {
        throw BackendUnavailableError("quasi_random backend is available for pointwise evaluation only");
    }
    if (settings.samples < 1000) {
        throw InputError("monte_carlo backend needs at least 1000 samples");
    }

    auto chunks = run_chunks<MomentAccumulator>(
        settings.samples, resolve_workers(settings.workers),
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            MomentAccumulator acc;
            std::vector<double> v(coords.size());
            std::vector<double> t;
            for (std::uint64_t i = begin; i < end; ++i) {
                RandomStream rng(settings.seed, StreamId::region_monte_carlo, i);
                double q = 1.0;
                for (std::size_t c = 0; c < coords.size(); ++c) q *= draw_coordinate(coords[c], rng, v[c]);
                const IntegrandSpec spec(model, configuration_from(v, k, l));
                if (spec.prefactor() == 0.0) {
                    acc.add(0.0);
                    continue;
                }
                const Proposal proposal(spec);
                t.assign(static_cast<std::size_t>(spec.dimension()), 0.0);
                const double w = proposal.draw(rng, t);
                acc.add(two_l * spec.prefactor() * w / q);
            }
            return acc;
        });
    MomentAccumulator total;
    for (const auto& c : chunks) total.merge(c);
    IntegralEstimate e;
    e.backend = Backend::monte_carlo;
    e.value = total.mean();
    e.error = total.std_error();
    e.effort = total.count;
    return finish(e);
}

} // namespace zerocorr
