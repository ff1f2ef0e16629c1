#include "doctest.h"

#include "zerocorr/random.hpp"
#include "zerocorr/simplex.hpp"

#include <cmath>
#include <limits>

using namespace zerocorr;

TEST_CASE("textbook program") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    Eigen::MatrixXd a(3, 2);
    a << 1, 0, 0, 2, 3, 2;
    Eigen::VectorXd b(3);
    b << 4, 12, 18;
    Eigen::VectorXd c(2);
    c << 3, 5;
    const LpResult r = simplex_maximize(a, b, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(36.0));
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(r.x(1) == doctest::Approx(6.0));
}

TEST_CASE("negative right-hand sides need phase one") {
    // x + y >= 2 written as -x - y <= -2, x <= 3, y <= 1; max x + 2y -> 5
    Eigen::MatrixXd a(3, 2);
    a << -1, -1, 1, 0, 0, 1;
    Eigen::VectorXd b(3);
    b << -2, 3, 1;
    Eigen::VectorXd c(2);
    c << 1, 2;
    const LpResult r = simplex_maximize(a, b, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(5.0));
}

TEST_CASE("infeasible and unbounded programs") {
    Eigen::MatrixXd a(2, 1);
    a << 1, -1;
    Eigen::VectorXd b(2);
    b << 1, -2;
    Eigen::VectorXd c(1);
    c << 1;
    CHECK(simplex_maximize(a, b, c).status == LpStatus::infeasible);

    Eigen::MatrixXd a2(1, 2);
    a2 << 1, -1;
    Eigen::VectorXd b2(1);
    b2 << 1;
    Eigen::VectorXd c2(2);
    c2 << 0, 1;
    CHECK(simplex_maximize(a2, b2, c2).status == LpStatus::unbounded);
}

TEST_CASE("free variables with two-sided rows") {
    // |t0 + t1| <= 1, |t0 - t1| <= 1 is a diamond; max t0 = 1
    Eigen::MatrixXd g(2, 2);
    g << 1, 1, 1, -1;
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
    Eigen::VectorXd c(2);
    c << -1, 0;
    const LpResult r = maximize_free(g, lo, hi, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(1.0));
    CHECK(r.x(0) == doctest::Approx(-1.0));

    Eigen::VectorXd open_hi = hi;
    open_hi(1) = std::numeric_limits<double>::infinity();
    Eigen::VectorXd open_lo = lo;
    open_lo(0) = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd c2(2);
    c2 << -1, 0;
    CHECK(maximize_free(g, open_lo, open_hi, c2).status == LpStatus::unbounded);
}

TEST_CASE("random boxes: optimisers are feasible and dominate samples") {
    RandomStream rng(9, StreamId::tests, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3);
        const int rows = d + 3;
        Eigen::MatrixXd g(rows, d);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
        }
        g.topRows(d) = Eigen::MatrixXd::Identity(d, d);
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(rows, -1.0);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(rows, 1.0);
        Eigen::VectorXd c(d);
        for (int j = 0; j < d; ++j) c(j) = rng.normal();
        const LpResult r = maximize_free(g, lo, hi, c);
        REQUIRE(r.status == LpStatus::optimal);
        const Eigen::VectorXd gx = g * r.x;
        CHECK(gx.maxCoeff() <= 1.0 + 1e-9);
        CHECK(gx.minCoeff() >= -1.0 - 1e-9);
        CHECK(c.dot(r.x) == doctest::Approx(r.objective));
        for (int s = 0; s < 200; ++s) {
            Eigen::VectorXd t(d);
            for (int j = 0; j < d; ++j) t(j) = 2.0 * rng.uniform() - 1.0;
            const Eigen::VectorXd gt = g * t;
            if (gt.cwiseAbs().maxCoeff() <= 1.0) CHECK(c.dot(t) <= r.objective + 1e-9);
        }
    }
}
