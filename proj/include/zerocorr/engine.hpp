#pragma once

#include "zerocorr/density.hpp"
#include "zerocorr/symmetric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace zerocorr {

enum class Backend { adaptive, monte_carlo, quasi_random };

std::string_view to_string(Backend b);
/// Throws InputError on an unknown name.
Backend backend_from_string(std::string_view name);

struct BackendSettings {
    Backend backend = Backend::adaptive;
    /// Relative tolerance of the adaptive backend.
    double tolerance = 1e-8;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    /// 0 selects hardware parallelism (subject to ZEROCORR_MAX_WORKERS).
    unsigned workers = 0;
    /// Largest integral dimension n - m + 1 handled by nested quadrature.
    int adaptive_cutoff = 4;
    /// Tail mass cut from each unbounded coefficient law by the adaptive backend.
    double truncation_eps = 1e-15;
    /// Independent digital shifts of the quasi-random backend.
    int qmc_replicates = 16;
};

struct IntegralEstimate {
    double value = 0.0;
    /// Absolute error estimate (quadrature) or standard error (sampling).
    double error = 0.0;
    Backend backend = Backend::adaptive;
    /// Integrand evaluations or samples spent.
    std::uint64_t effort = 0;
    /// Magnitude of a negative round-off value that was clamped to zero.
    double clamped = 0.0;
};

/// The t-integrand of rho_m for one configuration:
///   t -> prod_i f_i((M t)_i) * prod_x |Q(x)| * prod_z |Q(z)|^2,
/// with Q(w) = sum_j t_j w^j. v_m and 2^l are kept out as prefactors.
class IntegrandSpec {
public:
    /// Generic path: coefficient map from the symmetric functions of the tuple.
    IntegrandSpec(const CoefficientModel& model, const ZeroConfiguration& cfg);

    /// Density of real zeros at x: banded map with xi_i = t_{i-1} - x t_i.
    static IntegrandSpec real_banded(const CoefficientModel& model, double x);
    /// Density of complex zeros at z: xi_i = t_{i-2} - 2 Re z t_{i-1} + |z|^2 t_i.
    static IntegrandSpec complex_banded(const CoefficientModel& model, cplx z);

    const CoefficientModel& model() const { return model_; }
    int degree() const { return model_.degree(); }
    int m() const { return m_; }
    int dimension() const { return static_cast<int>(map_.cols()); }
    const Eigen::MatrixXd& map() const { return map_; }
    /// v_m of the full tuple.
    double prefactor() const { return prefactor_; }
    int pair_count() const { return static_cast<int>(pairs_.size()); }
    std::span<const double> real_points() const { return reals_; }
    std::span<const cplx> pair_points() const { return pairs_; }

    /// First / last column with a nonzero entry in row i (first > last for a zero row).
    int row_first(int i) const { return first_[static_cast<std::size_t>(i)]; }
    int row_last(int i) const { return last_[static_cast<std::size_t>(i)]; }

    double operator()(std::span<const double> t) const;
    /// (M t)_i.
    double coefficient(int i, std::span<const double> t) const;
    /// prod |Q(x)| prod |Q(z)|^2.
    double polynomial_factor(std::span<const double> t) const;

private:
    IntegrandSpec(CoefficientModel model, Eigen::MatrixXd map, std::vector<double> reals, std::vector<cplx> pairs,
                  double prefactor, int m);
    void index_rows();

    CoefficientModel model_;
    Eigen::MatrixXd map_;
    std::vector<double> reals_;
    std::vector<cplx> pairs_;
    double prefactor_;
    int m_;
    std::vector<int> first_;
    std::vector<int> last_;
};

/// Throws InputError if t has the wrong size or a non-finite entry.
double integrand(const IntegrandSpec& spec, std::span<const double> t);

/// Nested Gauss-Kronrod quadrature over the truncated domain. Throws
/// BackendUnavailableError when the dimension exceeds the cutoff.
IntegralEstimate integrate_adaptive(const IntegrandSpec& spec, const BackendSettings& settings);

/// Importance sampling with a model-specific proposal. Throws
/// DiagnosticsError if no sample lands in the support and the support is not
/// provably empty.
IntegralEstimate integrate_monte_carlo(const IntegrandSpec& spec, const BackendSettings& settings);

/// Randomly shifted Sobol' points through the matched gaussian proposal;
/// gaussian models only.
IntegralEstimate integrate_quasi_random(const IntegrandSpec& spec, const BackendSettings& settings);

IntegralEstimate integrate(const IntegrandSpec& spec, const BackendSettings& settings);

/// Region {t : lo_i <= (M t)_i <= hi_i} of a model with uniform coefficients,
/// with its tight bounding box.
struct FeasiblePolytope {
    Eigen::MatrixXd map;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;
    /// Optimisers of the 2d bounding programs (min then max per coordinate).
    std::vector<Eigen::VectorXd> extreme_points;
    bool empty = false;

    bool contains(const Eigen::VectorXd& t, double tol = 1e-9) const;
    double box_volume() const;
};

/// Requires every coefficient law to be uniform (ModelMismatchError otherwise).
FeasiblePolytope build_polytope(const IntegrandSpec& spec);

/// v_m times the t-integral; no 2^l factor.
IntegralEstimate rho_m(const CoefficientModel& model, const ZeroConfiguration& cfg, const BackendSettings& settings);

/// Mixed (k, l)-correlation function: 2^l rho_{k+2l}(x, z, conj z).
IntegralEstimate rho_kl(const CoefficientModel& model, const ZeroConfiguration& cfg, const BackendSettings& settings);

/// Density of real zeros through the banded specialisation.
IntegralEstimate rho_real_density(const CoefficientModel& model, double x, const BackendSettings& settings);

/// Density of complex zeros through the banded specialisation; zero for n = 1.
/// Throws DomainError for Im z <= 0.
IntegralEstimate rho_complex_density(const CoefficientModel& model, cplx z, const BackendSettings& settings);

/// Closed interval of the real line; ends may be infinite.
struct Interval {
    double lo;
    double hi;
};

/// Axis-aligned rectangle in the closed upper half-plane; im_lo >= 0 and the
/// far ends may be infinite.
struct Rectangle {
    double re_lo;
    double re_hi;
    double im_lo;
    double im_hi;
};

/// Integral of rho_{k,l} over B_1 x .. x B_k x R_1 x .. x R_l.
/// Adaptive: nested quadrature when k + 2l <= 2. Monte Carlo: configuration
/// drawn uniformly on finite ranges and from Cauchy laws on infinite ones,
/// with a single inner proposal draw per configuration.
IntegralEstimate integrate_correlation(const CoefficientModel& model, std::span<const Interval> real_sets,
                                       std::span<const Rectangle> complex_sets, const BackendSettings& settings);

} // namespace zerocorr
