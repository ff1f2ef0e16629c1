#include "doctest.h"

#include "zerocorr/closed_forms.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/quadrature.hpp"

#include <algorithm>
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

// 2^l v_n times the one-dimensional integral of |t|^n prod_i f_i((-1)^{n-i} sigma_{n-i} t).
double quadrature_oracle(const CoefficientModel& model, const ZeroConfiguration& cfg) {
    const int n = model.degree();
    const SymmetricProfile p = elementary_symmetric(cfg);
    std::vector<double> knots{0.0};
    for (int i = 0; i <= n; ++i) {
        const double c = ((n - i) % 2 == 0 ? 1.0 : -1.0) * p.at(n - i);
        if (c == 0.0) continue;
        for (double b : model.density(i).breakpoints()) knots.push_back(b / c);
        const Support s = model.density(i).support();
        for (double e : {s.lo, s.hi}) {
            if (std::isfinite(e)) knots.push_back(e / c);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    opts.max_intervals = 5000;
    const auto r = integrate_line(
        [&](double t) {
            double v = std::pow(std::abs(t), n);
            for (int i = 0; i <= n && v != 0.0; ++i) {
                const double c = ((n - i) % 2 == 0 ? 1.0 : -1.0) * p.at(n - i);
                v *= model.density(i)(c * t);
            }
            return v;
        },
        -kInf, kInf, knots, opts);
    return std::ldexp(p.vandermonde, cfg.l()) * r.value;
}

// Real parts in [-2, 2], or in [-2, 0] when `left` (so exponential indicators can hold).
ZeroConfiguration random_config(RandomStream& rng, int k, int l, bool left) {
    const double hi = left ? 0.0 : 2.0;
    auto re = [&] { return -2.0 + (hi + 2.0) * rng.uniform(); };
    std::vector<double> xs;
    std::vector<cplx> zs;
    for (int i = 0; i < k; ++i) xs.push_back(re());
    for (int i = 0; i < l; ++i) {
        const double r = re();
        zs.emplace_back(r, 0.05 + 1.95 * rng.uniform());
    }
    return ZeroConfiguration(std::move(xs), std::move(zs));
}

} // namespace

TEST_CASE("uniform examples") {
    CHECK(uniform_joint(uniform(1), ZeroConfiguration({0.0}, {})).value == doctest::Approx(0.25));
    CHECK(uniform_joint(uniform(1), ZeroConfiguration({2.0}, {})).value == doctest::Approx(1.0 / 16.0));
    CHECK(uniform_joint(uniform(2), ZeroConfiguration({0.5, 0.5}, {})).value == 0.0);
    CHECK_THROWS_AS(uniform_joint(gaussian(1), ZeroConfiguration({0.0}, {})), ModelMismatchError);
    CHECK_THROWS_AS(uniform_joint(CoefficientModel::iid(1, CoefficientDensity::uniform(-1.0, 2.0)),
                                  ZeroConfiguration({0.0}, {})),
                    ModelMismatchError);
    CHECK_THROWS_AS(uniform_joint(uniform(3), ZeroConfiguration({0.0}, {})), DimensionError);
}

TEST_CASE("gaussian examples") {
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        CHECK(gaussian_joint(gaussian(1), ZeroConfiguration({x}, {})).value ==
              doctest::Approx(1.0 / (std::numbers::pi * (1.0 + x * x))).epsilon(1e-13));
    }
    const ZeroConfiguration zi({}, {cplx(0.0, 1.0)});
    CHECK(gaussian_joint(gaussian(2), zi).value == doctest::Approx(quadrature_oracle(gaussian(2), zi)).epsilon(1e-10));
    CHECK(gaussian_joint(gaussian(2), ZeroConfiguration({1.0, 1.0}, {})).value == 0.0);
    CHECK_THROWS_AS(gaussian_joint(uniform(1), ZeroConfiguration({0.0}, {})), ModelMismatchError);
    // the frequently quoted constant differs from the derived one by this factor
    CHECK(gaussian_quoted_constant_ratio(1) == doctest::Approx(std::sqrt(std::numbers::pi)));
    CHECK(gaussian_quoted_constant_ratio(3) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)));
}

TEST_CASE("exponential examples") {
    CHECK(exponential_joint(exponential(1), ZeroConfiguration({-1.0}, {})).value == doctest::Approx(0.25));
    const auto pos = exponential_joint(exponential(1), ZeroConfiguration({0.5}, {}));
    CHECK(pos.value == 0.0);
    CHECK_FALSE(pos.indicator);
    // includes the 2^l of the (k, l) normalisation; the quadrature oracle decides
    const ZeroConfiguration zi({}, {cplx(0.0, 1.0)});
    const auto v = exponential_joint(exponential(2), zi);
    CHECK(v.indicator);
    CHECK(v.value == doctest::Approx(1.0));
    CHECK(v.value == doctest::Approx(quadrature_oracle(exponential(2), zi)).epsilon(1e-10));
    CHECK_THROWS_AS(exponential_joint(CoefficientModel::iid(1, CoefficientDensity::exponential(2.0)),
                                      ZeroConfiguration({-1.0}, {})),
                    ModelMismatchError);
}

TEST_CASE("dispatch by family") {
    CHECK(closed_form_family(uniform(2)) == ClosedFormFamily::uniform);
    CHECK(closed_form_family(gaussian(2)) == ClosedFormFamily::gaussian);
    CHECK(closed_form_family(exponential(2)) == ClosedFormFamily::exponential);
    CHECK_FALSE(closed_form_family(CoefficientModel::iid(2, CoefficientDensity::uniform(0.0, 1.0))).has_value());
    CHECK_THROWS_AS(joint_density(CoefficientModel::iid(2, CoefficientDensity::uniform(0.0, 1.0)),
                                  ZeroConfiguration({0.1, 0.2}, {})),
                    ModelMismatchError);
    CHECK(to_string(ClosedFormFamily::gaussian) == "gaussian");
}

TEST_CASE("closed forms match one-dimensional quadrature") {
    RandomStream rng(17, StreamId::tests, 0);
    int nonzero_exponential = 0;
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const int l = static_cast<int>(rng.uniform() * (n / 2 + 1));
            const ZeroConfiguration cfg = random_config(rng, n - 2 * l, l, trial % 2 == 0);
            for (const auto& model : {uniform(n), gaussian(n), exponential(n)}) {
                const double closed = joint_density(model, cfg).value;
                const double quad = quadrature_oracle(model, cfg);
                CAPTURE(n);
                CAPTURE(l);
                CAPTURE(to_string(*closed_form_family(model)));
                CHECK(std::abs(closed - quad) <= 1e-8 * std::abs(quad) + 1e-300);
                if (model.all_standard_exponential() && closed > 0.0) ++nonzero_exponential;
            }
        }
    }
    CHECK(nonzero_exponential > 10);
}

TEST_CASE("closed forms match the generic engine") {
    BackendSettings s;
    s.tolerance = 1e-11;
    for (const auto& model : {uniform(2), gaussian(2), exponential(2)}) {
        for (const ZeroConfiguration& cfg : {ZeroConfiguration({-0.7, 0.3}, {}), ZeroConfiguration({}, {cplx(-0.4, 0.8)})}) {
            const double a = joint_density(model, cfg).value;
            const double b = rho_kl(model, cfg, s).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-8));
        }
    }
}

TEST_CASE("real count probabilities") {
    BackendSettings s;
    s.tolerance = 1e-8;
    CHECK(prob_real_count(gaussian(1), 0, s).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(prob_real_count(gaussian(2), 2, s), DomainError);
    CHECK_THROWS_AS(prob_real_count(gaussian(2), -1, s), DomainError);

    const double e2 = prob_real_count(exponential(2), 0, s).value;
    CHECK(e2 == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    const double u2 = prob_real_count(uniform(2), 0, s).value;
    CHECK(std::abs(u2 - (41.0 / 72.0 + std::numbers::ln2 / 12.0)) < 1e-5);
    const double u0 = prob_real_count(uniform(2), 1, s).value;
    CHECK(std::abs(u0 - (31.0 / 72.0 - std::numbers::ln2 / 12.0)) < 1e-5);

    for (const auto& model : {gaussian(2), exponential(2)}) {
        const double sum = prob_real_count(model, 0, s).value + prob_real_count(model, 1, s).value;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("real count for a generic model") {
    const CoefficientModel m = CoefficientModel::iid(2, CoefficientDensity::tabulated({-1.0, 0.5, 1.0}, {0.2, 1.0, 0.0}));
    BackendSettings a;
    a.tolerance = 1e-6;
    const auto p2 = prob_real_count(m, 0, a);
    CHECK(p2.backend == Backend::adaptive);
    BackendSettings mc;
    mc.backend = Backend::monte_carlo;
    mc.samples = 200000;
    mc.seed = 3;
    const auto p0 = prob_real_count(m, 1, mc);
    CHECK(p0.backend == Backend::monte_carlo);
    CHECK(std::abs(p2.value + p0.value - 1.0) <= 3.0 * std::hypot(p2.error, p0.error) + 1e-3);
    CHECK_THROWS_AS(prob_real_count(m, 1, [] {
                        BackendSettings q;
                        q.backend = Backend::quasi_random;
                        return q;
                    }()),
                    BackendUnavailableError);
}
