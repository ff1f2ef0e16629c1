#pragma once

#include "zerocorr/density.hpp"
#include "zerocorr/engine.hpp"
#include "zerocorr/symmetric.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace zerocorr {

// ---------------------------------------------------------------------------
// Roots

struct RootFinderOptions {
    int max_iterations = 500;
    int polish_steps = 2;
};

struct RootResult {
    /// n roots of the polynomial sum_i a_i z^i.
    std::vector<cplx> roots;
    bool converged = false;
    int iterations = 0;
    /// max over roots of |G(r)| / sum_i |a_i| |r|^i.
    double max_residual = 0.0;
};

/// Aberth-Ehrlich iteration on the polynomial scaled to unit geometric mean
/// of its extreme coefficients, started on the unit circle, followed by
/// Newton polishing on the original coefficients. Coefficients are in
/// ascending order; throws InputError if there are fewer than two, the
/// leading one is zero or any is non-finite.
RootResult find_roots(std::span<const double> coefficients, const RootFinderOptions& opts = {});

/// |G(r)| / sum_i |a_i| |r|^i.
double relative_residual(std::span<const double> coefficients, cplx root);

struct RootClassification {
    /// Sorted ascending.
    std::vector<double> real_roots;
    /// Upper-half-plane representatives, Im > 0.
    std::vector<cplx> complex_pairs;
    /// Roots moved to the real set to restore the parity count.
    int reclassified = 0;
    /// A conjugate partner could not be found within solver noise.
    bool flagged = false;
};

/// A root is real iff |Im| <= tau (1 + |Re|); the others are greedily
/// paired with their nearest conjugates.
RootClassification classify_roots(std::span<const cplx> roots, double tau = 1e-9);

// ---------------------------------------------------------------------------
// Samples

struct LabOptions {
    double tau = 1e-9;
    double residual_threshold = 1e-8;
    RootFinderOptions roots;
    unsigned workers = 0;
};

struct ZeroSample {
    std::uint64_t index = 0;
    std::vector<double> coefficients;
    std::vector<double> real_roots;
    std::vector<cplx> complex_pairs;
    double max_residual = 0.0;
    int reclassified = 0;
    bool flagged = false;
};

/// Roots and classification of one coefficient vector.
ZeroSample analyse_polynomial(std::span<const double> coefficients, const LabOptions& opts = {});

/// Sample `index` of the coefficient stream of `seed`.
ZeroSample draw_sample(const CoefficientModel& model, std::uint64_t seed, std::uint64_t index,
                       const LabOptions& opts = {});

/// One JSON object per line: {index, coefficients, real_roots, complex_pairs, residual, flagged}.
std::string sample_json_line(const ZeroSample& s);

/// k real intervals and l rectangles in the open upper half-plane, pairwise
/// disjoint. Throws InputError otherwise.
class BoxFamily {
public:
    BoxFamily() = default;
    BoxFamily(std::vector<Interval> intervals, std::vector<Rectangle> rectangles);

    std::span<const Interval> intervals() const { return intervals_; }
    std::span<const Rectangle> rectangles() const { return rectangles_; }
    bool empty() const { return intervals_.empty() && rectangles_.empty(); }

    /// prod_i mu(B_i) for one sample.
    double count_product(const ZeroSample& s) const;

private:
    std::vector<Interval> intervals_;
    std::vector<Rectangle> rectangles_;
};

/// Number of real roots in [lo, hi) and of pair representatives in
/// [re_lo, re_hi) x [im_lo, im_hi).
int count_in(const ZeroSample& s, const Interval& iv);
int count_in(const ZeroSample& s, const Rectangle& r);

struct LabDiagnostics {
    std::uint64_t samples = 0;
    std::uint64_t flagged = 0;
    std::uint64_t reclassified = 0;
    double max_residual = 0.0;

    double flagged_rate() const { return samples ? static_cast<double>(flagged) / static_cast<double>(samples) : 0.0; }
};

struct CellEstimate {
    double value = 0.0;
    double error = 0.0;
};

struct RealCountPmf {
    /// Real-root counts n, n-2, .. down to n mod 2.
    std::vector<int> counts;
    std::vector<double> probability;
    std::vector<double> error;
};

struct SimulationRequest {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<Interval> real_cells;
    std::vector<Rectangle> complex_cells;
    std::vector<BoxFamily> boxes;
    bool pmf = false;
    /// Receives one JSON line per sample, in sample order.
    std::ostream* dump = nullptr;
};

struct SimulationReport {
    /// Mean count per cell.
    std::vector<CellEstimate> real_mass;
    std::vector<CellEstimate> complex_mass;
    /// Mean count divided by the cell measure (0 for unbounded cells).
    std::vector<CellEstimate> real_density;
    std::vector<CellEstimate> complex_density;
    std::vector<IntegralEstimate> moments;
    RealCountPmf pmf;
    LabDiagnostics diagnostics;
};

/// Single pass over the coefficient stream. Flagged samples are excluded
/// from every estimator and counted in the diagnostics. Throws InputError
/// for zero samples.
SimulationReport simulate(const CoefficientModel& model, const SimulationRequest& request, const LabOptions& opts = {});

std::vector<CellEstimate> estimate_density(const CoefficientModel& model, std::span<const Interval> cells,
                                           std::uint64_t samples, std::uint64_t seed, const LabOptions& opts = {});
std::vector<CellEstimate> estimate_density(const CoefficientModel& model, std::span<const Rectangle> cells,
                                           std::uint64_t samples, std::uint64_t seed, const LabOptions& opts = {});
IntegralEstimate estimate_mixed_moment(const CoefficientModel& model, const BoxFamily& boxes, std::uint64_t samples,
                                       std::uint64_t seed, const LabOptions& opts = {});
RealCountPmf real_count_pmf(const CoefficientModel& model, std::uint64_t samples, std::uint64_t seed,
                            const LabOptions& opts = {});

// ---------------------------------------------------------------------------
// Validation

struct Comparison {
    std::string name;
    double analytic = 0.0;
    double analytic_error = 0.0;
    double empirical = 0.0;
    double empirical_error = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

/// z = (a - e) / sqrt(sa^2 + se^2); pass iff |z| < threshold. With both
/// errors zero, pass iff the values agree exactly.
Comparison compare(std::string name, const IntegralEstimate& analytic, const IntegralEstimate& empirical,
                   double threshold = 3.0);

struct ComparisonSpec {
    enum class Kind { real_mass, complex_mass, mixed_moment, real_count };
    Kind kind = Kind::real_mass;
    std::string name;
    Interval interval{0.0, 1.0};
    Rectangle rectangle{0.0, 1.0, 0.5, 1.5};
    BoxFamily boxes;
    /// Number of complex pairs for real_count.
    int pairs = 0;
};

struct ValidationSettings {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    /// Samples of Monte Carlo analytic integrals.
    std::uint64_t analytic_samples = 400000;
    double tolerance = 1e-7;
    LabOptions lab;
};

struct ValidationReport {
    std::string scenario;
    std::vector<Comparison> comparisons;
    LabDiagnostics diagnostics;

    bool passed() const;
};

/// Analytic side: adaptive integration where the nesting stays small, Monte
/// Carlo otherwise. Empirical side: one simulation pass.
ValidationReport validation_report(const CoefficientModel& model, std::span<const ComparisonSpec> specs,
                                   const ValidationSettings& settings);

} // namespace zerocorr
