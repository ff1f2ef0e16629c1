#pragma once

#include "zerocorr/density.hpp"
#include "zerocorr/engine.hpp"
#include "zerocorr/symmetric.hpp"

#include <optional>
#include <string_view>

namespace zerocorr {

/// Coefficient families with an explicit joint density at k + 2l = n.
enum class ClosedFormFamily { uniform, gaussian, exponential };

std::string_view to_string(ClosedFormFamily f);

/// Uniform(-1, 1), gaussian (any standard deviations) or rate-1 exponential
/// for every coefficient; nullopt otherwise.
std::optional<ClosedFormFamily> closed_form_family(const CoefficientModel& model);

struct JointDensityValue {
    double value = 0.0;
    ClosedFormFamily family = ClosedFormFamily::uniform;
    /// Sign conditions of the exponential family; always true for the others.
    bool indicator = true;
};

// All three throw DimensionError unless k + 2l equals the degree and
// ModelMismatchError for a model outside the family.

/// 2^{l-n} v_n / ((n + 1) max_i |sigma_i|^{n+1}).
JointDensityValue uniform_joint(const CoefficientModel& model, const ZeroConfiguration& cfg);

/// 2^l v_n Gamma((n+1)/2) A^{-(n+1)/2} / (pi^{(n+1)/2} v_0 .. v_n),
/// A = sum_i sigma_{n-i}^2 / v_i^2, with v_i the standard deviations.
JointDensityValue gaussian_joint(const CoefficientModel& model, const ZeroConfiguration& cfg);

/// 2^l n! v_n / prod(1 - w)^{n+1} when (-1)^i sigma_i >= 0 for every i, else 0.
JointDensityValue exponential_joint(const CoefficientModel& model, const ZeroConfiguration& cfg);

/// Dispatches on closed_form_family; ModelMismatchError if there is none.
JointDensityValue joint_density(const CoefficientModel& model, const ZeroConfiguration& cfg);

/// Ratio of the frequently quoted gaussian constant
/// 2^{l+1/2} Gamma((n+1)/2) / ((2 pi)^{n/2} v_0 .. v_n) to the one used by
/// gaussian_joint: 2^{(1-n)/2} sqrt(pi).
double gaussian_quoted_constant_ratio(int n);

/// Probability that exactly n - 2l zeros are real:
///   (1 / (l! (n-2l)!)) * integral of rho_{n-2l,l} over R^{n-2l} x C_+^l.
/// Adaptive backend and n <= 3: nested quadrature over ordered real points
/// (closed form when available, engine otherwise); complex blocks of
/// non-closed-form models and everything with n > 3 go through Monte Carlo
/// with Cauchy proposals. Throws DomainError if l < 0 or 2l > n.
IntegralEstimate prob_real_count(const CoefficientModel& model, int l, const BackendSettings& settings);

} // namespace zerocorr
