#include "doctest.h"

#include "zerocorr/engine.hpp"
#include "zerocorr/error.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace zerocorr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CoefficientModel gaussian(int n) { return CoefficientModel::iid(n, CoefficientDensity::gaussian(1.0)); }
CoefficientModel uniform(int n) { return CoefficientModel::iid(n, CoefficientDensity::uniform(-1.0, 1.0)); }
CoefficientModel exponential(int n) { return CoefficientModel::iid(n, CoefficientDensity::exponential()); }

BackendSettings adaptive(double tol = 1e-10) {
    BackendSettings s;
    s.tolerance = tol;
    return s;
}

BackendSettings sampling(Backend b, std::uint64_t samples, std::uint64_t seed = 7) {
    BackendSettings s;
    s.backend = b;
    s.samples = samples;
    s.seed = seed;
    return s;
}

bool agree(const IntegralEstimate& a, const IntegralEstimate& b, double sigmas = 3.0) {
    const double se = std::hypot(a.error, b.error);
    return std::abs(a.value - b.value) <= sigmas * se;
}

} // namespace

TEST_CASE("integrand examples") {
    const IntegrandSpec spec(gaussian(1), ZeroConfiguration({0.0}, {}));
    const std::array<double, 1> one{1.0};
    CHECK(integrand(spec, one) == doctest::Approx(std::exp(-0.5) / (2.0 * std::numbers::pi)).epsilon(1e-14));
    const std::array<double, 1> zero{0.0};
    CHECK(integrand(spec, zero) == 0.0);

    // xi_0 = -x t, xi_1 = t: at x = 1 and t = 1 the constant coefficient is negative
    const IntegrandSpec e(exponential(1), ZeroConfiguration({1.0}, {}));
    CHECK(integrand(e, one) == 0.0);

    const std::array<double, 2> wrong{1.0, 2.0};
    CHECK_THROWS_AS(integrand(spec, wrong), InputError);
    const std::array<double, 1> bad{std::nan("")};
    CHECK_THROWS_AS(integrand(spec, bad), InputError);
}

TEST_CASE("degree-one oracles") {
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0, 0.37}) {
        CAPTURE(x);
        const double cauchy = 1.0 / (std::numbers::pi * (1.0 + x * x));
        CHECK(rho_real_density(gaussian(1), x, adaptive()).value == doctest::Approx(cauchy).epsilon(1e-9));
        const double u = 0.25 / std::pow(std::max(1.0, std::abs(x)), 2);
        CHECK(rho_real_density(uniform(1), x, adaptive()).value == doctest::Approx(u).epsilon(1e-9));
        const double ex = x <= 0.0 ? 1.0 / ((1.0 - x) * (1.0 - x)) : 0.0;
        const double got = rho_real_density(exponential(1), x, adaptive(1e-12)).value;
        if (ex == 0.0) {
            CHECK(got == 0.0);
        } else {
            CHECK(got == doctest::Approx(ex).epsilon(1e-9));
        }
    }
    CHECK(rho_m(uniform(1), ZeroConfiguration({0.0}, {}), adaptive()).value == doctest::Approx(0.25));
}

TEST_CASE("coincident points and the real axis") {
    CHECK(rho_m(gaussian(3), ZeroConfiguration({0.4, 0.4}, {}), adaptive()).value == 0.0);
    const double far = rho_kl(gaussian(2), ZeroConfiguration({}, {cplx(0.3, 0.5)}), adaptive()).value;
    const double near = rho_kl(gaussian(2), ZeroConfiguration({}, {cplx(0.3, 1e-4)}), adaptive()).value;
    CHECK(near < 1e-3 * far);
    CHECK_THROWS_AS(rho_complex_density(gaussian(2), cplx(0.3, 0.0), adaptive()), DomainError);
    CHECK(rho_complex_density(gaussian(1), cplx(0.3, 1.0), adaptive()).value == 0.0);
}

TEST_CASE("banded and generic paths agree") {
    for (const auto& model : {gaussian(3), uniform(3), exponential(3)}) {
        for (double x : {-1.5, -0.3, 0.9}) {
            const double a = rho_real_density(model, x, adaptive(1e-8)).value;
            const double b = rho_kl(model, ZeroConfiguration({x}, {}), adaptive(1e-8)).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-7));
        }
    }
    for (const auto& model : {gaussian(2), gaussian(3), uniform(3)}) {
        for (cplx z : {cplx(0.0, 1.0), cplx(-0.7, 0.4), cplx(0.5, 1.3)}) {
            const double a = rho_complex_density(model, z, adaptive()).value;
            const double b = rho_kl(model, ZeroConfiguration({}, {z}), adaptive()).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-7));
        }
    }
}

TEST_CASE("symmetry under permutations") {
    const auto model = gaussian(4);
    const double a = rho_kl(model, ZeroConfiguration({-0.4, 0.8}, {}), adaptive(1e-8)).value;
    const double b = rho_kl(model, ZeroConfiguration({0.8, -0.4}, {}), adaptive(1e-8)).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
    const auto mc = sampling(Backend::monte_carlo, 20000);
    const auto m6 = gaussian(6);
    const cplx z1(0.2, 0.6);
    const cplx z2(-0.5, 1.1);
    const double c = rho_kl(m6, ZeroConfiguration({0.1}, {z1, z2}), mc).value;
    const double d = rho_kl(m6, ZeroConfiguration({0.1}, {z2, z1}), mc).value;
    CHECK(c == doctest::Approx(d).epsilon(1e-9));
}

TEST_CASE("diagonal vanishing is linear") {
    const auto model = gaussian(3);
    std::vector<double> ratio;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        ratio.push_back(rho_kl(model, ZeroConfiguration({0.3, 0.3 + h}, {}), adaptive()).value / h);
    }
    CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(0.02));
    CHECK(ratio[2] == doctest::Approx(ratio[1]).epsilon(0.02));
}

TEST_CASE("tolerance refinement") {
    const auto model = gaussian(3);
    const ZeroConfiguration cfg({0.2}, {cplx(-0.3, 0.7)});
    const double coarse = rho_kl(model, cfg, adaptive(1e-6)).value;
    const double fine = rho_kl(model, cfg, adaptive(1e-10)).value;
    CHECK(std::abs(coarse - fine) <= 1e-5 * fine);
}

TEST_CASE("adaptive cutoff") {
    BackendSettings s = adaptive();
    CHECK_THROWS_AS(rho_real_density(gaussian(5), 0.1, s), BackendUnavailableError);
    s.adaptive_cutoff = 1;
    CHECK_THROWS_AS(rho_real_density(gaussian(2), 0.1, s), BackendUnavailableError);
    s.adaptive_cutoff = 2;
    CHECK(rho_real_density(gaussian(2), 0.1, s).value > 0.0);
}

TEST_CASE("monte carlo agrees with adaptive") {
    const auto mc = sampling(Backend::monte_carlo, 200000);
    for (const auto& model : {gaussian(3), uniform(3), exponential(3)}) {
        const ZeroConfiguration cfg({-0.6}, {cplx(0.2, 0.5)});
        const auto a = rho_kl(model, cfg, adaptive(1e-9));
        const auto b = rho_kl(model, cfg, mc);
        CHECK(b.backend == Backend::monte_carlo);
        CHECK(b.error > 0.0);
        CHECK(agree(a, b));
    }
    const auto a = rho_real_density(uniform(3), 0.7, adaptive(1e-9));
    const auto b = rho_real_density(uniform(3), 0.7, mc);
    CHECK(agree(a, b));
}

TEST_CASE("quasi-random agrees with monte carlo") {
    const auto model = gaussian(3);
    const ZeroConfiguration cfg({0.5}, {});
    const auto a = rho_kl(model, cfg, adaptive(1e-8));
    const auto q = rho_kl(model, cfg, sampling(Backend::quasi_random, 1 << 16));
    const auto m = rho_kl(model, cfg, sampling(Backend::monte_carlo, 1 << 16));
    CHECK(agree(q, m));
    CHECK(agree(a, q, 4.0));
    CHECK(q.error < m.error);
    CHECK_THROWS_AS(rho_kl(uniform(4), cfg, sampling(Backend::quasi_random, 1 << 12)), BackendUnavailableError);
}

TEST_CASE("sampling backends are deterministic") {
    const auto model = exponential(5);
    const ZeroConfiguration cfg({-0.5}, {cplx(0.1, 0.9)});
    for (Backend b : {Backend::monte_carlo}) {
        auto s1 = sampling(b, 30000, 99);
        s1.workers = 1;
        auto s4 = s1;
        s4.workers = 4;
        const auto a = rho_kl(model, cfg, s1);
        const auto c = rho_kl(model, cfg, s1);
        const auto d = rho_kl(model, cfg, s4);
        CHECK(a.value == c.value);
        CHECK(a.error == c.error);
        CHECK(a.value == d.value);
        CHECK(a.error == d.error);
    }
    auto q1 = sampling(Backend::quasi_random, 1 << 14, 5);
    q1.workers = 1;
    auto q4 = q1;
    q4.workers = 4;
    const auto g = gaussian(5);
    CHECK(rho_kl(g, cfg, q1).value == rho_kl(g, cfg, q4).value);
    CHECK_THROWS_AS(rho_kl(model, cfg, sampling(Backend::monte_carlo, 999)), InputError);
}

TEST_CASE("polytope examples") {
    const FeasiblePolytope p1 = build_polytope(IntegrandSpec(uniform(1), ZeroConfiguration({0.0}, {})));
    REQUIRE_FALSE(p1.empty);
    CHECK(p1.box_lo(0) == doctest::Approx(-1.0));
    CHECK(p1.box_hi(0) == doctest::Approx(1.0));

    const FeasiblePolytope p2 = build_polytope(IntegrandSpec(uniform(2), ZeroConfiguration({0.0, 0.0}, {})));
    CHECK(p2.box_lo(0) == doctest::Approx(-1.0));
    CHECK(p2.box_hi(0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(build_polytope(IntegrandSpec(gaussian(1), ZeroConfiguration({0.0}, {}))), ModelMismatchError);
}

TEST_CASE("random polytopes: box faces are attained") {
    RandomStream rng(21, StreamId::tests, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = 3.0 * rng.uniform() - 1.5;
        const double y = 3.0 * rng.uniform() - 1.5;
        const FeasiblePolytope p = build_polytope(IntegrandSpec(uniform(4), ZeroConfiguration({x, y}, {})));
        REQUIRE_FALSE(p.empty);
        const int d = static_cast<int>(p.box_lo.size());
        REQUIRE(p.extreme_points.size() == static_cast<std::size_t>(2 * d));
        for (int j = 0; j < d; ++j) {
            const Eigen::VectorXd& lo = p.extreme_points[static_cast<std::size_t>(2 * j)];
            const Eigen::VectorXd& hi = p.extreme_points[static_cast<std::size_t>(2 * j + 1)];
            CHECK(p.contains(lo));
            CHECK(p.contains(hi));
            CHECK(lo(j) == doctest::Approx(p.box_lo(j)));
            CHECK(hi(j) == doctest::Approx(p.box_hi(j)));
        }
        // membership agrees with direct constraint evaluation
        for (int s = 0; s < 200; ++s) {
            Eigen::VectorXd t(d);
            for (int j = 0; j < d; ++j) t(j) = p.box_lo(j) + (p.box_hi(j) - p.box_lo(j)) * rng.uniform();
            const Eigen::VectorXd xi = p.map * t;
            const bool inside = (xi.array() >= p.lo.array() - 1e-9).all() && (xi.array() <= p.hi.array() + 1e-9).all();
            CHECK(inside == p.contains(t));
        }
    }
}

TEST_CASE("empty support gives an exact zero") {
    // xi_0 = -t and xi_1 = t cannot both lie in [1, 2]
    const CoefficientModel m = CoefficientModel::iid(1, CoefficientDensity::uniform(1.0, 2.0));
    const IntegrandSpec spec(m, ZeroConfiguration({1.0}, {}));
    CHECK(build_polytope(spec).empty);
    const auto e = integrate(spec, sampling(Backend::monte_carlo, 10000));
    CHECK(e.value == 0.0);
    CHECK(e.error == 0.0);
    CHECK(integrate(spec, adaptive()).value == 0.0);
}

TEST_CASE("proposal that never hits the support") {
    const CoefficientModel m(1, {CoefficientDensity::uniform(1e6, 1e6 + 1.0),
                                 CoefficientDensity::tabulated({0.0, 1.0}, {1.0, 1.0})});
    const IntegrandSpec spec(m, ZeroConfiguration({-2e6}, {}));
    CHECK_THROWS_AS(integrate_monte_carlo(spec, sampling(Backend::monte_carlo, 10000)), DiagnosticsError);
}

TEST_CASE("integrals over sets") {
    const std::array<Interval, 1> unit{Interval{-1.0, 1.0}};
    const auto a = integrate_correlation(gaussian(1), unit, {}, adaptive(1e-9));
    CHECK(a.value == doctest::Approx(0.5).epsilon(1e-8));
    const auto b = integrate_correlation(gaussian(1), unit, {}, sampling(Backend::monte_carlo, 100000));
    CHECK(agree(a, b));

    const std::array<Interval, 1> line{Interval{-kInf, kInf}};
    CHECK(integrate_correlation(uniform(1), line, {}, adaptive(1e-9)).value == doctest::Approx(1.0).epsilon(1e-6));

    const std::array<Rectangle, 1> rect{Rectangle{-1.0, 1.0, 0.2, 1.5}};
    const auto c = integrate_correlation(gaussian(2), {}, rect, adaptive(1e-8));
    const auto d = integrate_correlation(gaussian(2), {}, rect, sampling(Backend::monte_carlo, 200000));
    CHECK(agree(c, d));

    const std::array<Interval, 2> two{Interval{0.0, 1.0}, Interval{1.0, 2.0}};
    CHECK_THROWS_AS(integrate_correlation(gaussian(1), two, {}, adaptive()), DimensionError);
    const std::array<Interval, 1> bad{Interval{1.0, 0.0}};
    CHECK_THROWS_AS(integrate_correlation(gaussian(2), bad, {}, adaptive()), InputError);
    CHECK_THROWS_AS(integrate_correlation(gaussian(2), {}, {}, adaptive()), InputError);
}
