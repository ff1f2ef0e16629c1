#pragma once

#include <Eigen/Dense>

#include <vector>

namespace zerocorr {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
};

/// Dense two-phase tableau simplex with Bland's rule:
///   maximize c'x  subject to  A x <= b,  x >= 0.
/// Sized for the tiny programs that bound integration domains (a handful of
/// variables, a few dozen rows).
LpResult simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

/// maximize c't over free t subject to lo_i <= (G t)_i <= hi_i; infinite
/// sides are dropped.
LpResult maximize_free(const Eigen::MatrixXd& g, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       const Eigen::VectorXd& c);

} // namespace zerocorr
