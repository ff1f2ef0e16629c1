#include "zerocorr/lab.hpp"

#include "zerocorr/closed_forms.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/parallel.hpp"
#include "zerocorr/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace zerocorr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerValue {
    cplx p;
    cplx dp;
};

// Newton correction p / p' of a monic-scaled polynomial; the reversed
// polynomial is used outside the unit disk. `settled` is set when |p| is
// already at the rounding level of its evaluation.
cplx newton_ratio(std::span<const cplx> c, cplx y, bool& settled) {
    const std::size_t n = c.size() - 1;
    const bool inside = std::abs(y) <= 1.0;
    const cplx x = inside ? y : 1.0 / y;
    const double ax = std::abs(x);
    cplx p = 0.0;
    cplx dp = 0.0;
    double bound = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const cplx ck = inside ? c[n - k] : c[k];
        dp = dp * x + p;
        p = p * x + ck;
        bound = bound * ax + std::abs(ck);
    }
    settled = std::abs(p) <= 4.0 * kEps * bound;
    if (p == 0.0) return 0.0;
    if (inside) return p / dp;
    return y / (static_cast<double>(n) - x * dp / p);
}

HornerValue horner_real(std::span<const double> a, cplx z) {
    const std::size_t n = a.size() - 1;
    cplx p = a[n];
    cplx dp = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[i];
    }
    return {p, dp};
}

} // namespace

double relative_residual(std::span<const double> coefficients, cplx root) {
    const double r = std::abs(root);
    double scale = 0.0;
    double power = 1.0;
    for (double a : coefficients) {
        scale += std::abs(a) * power;
        power *= r;
    }
    if (scale == 0.0 || !std::isfinite(scale)) return scale == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(horner_real(coefficients, root).p) / scale;
}

RootResult find_roots(std::span<const double> coefficients, const RootFinderOptions& opts) {
    if (coefficients.size() < 2) throw InputError("a polynomial needs degree >= 1");
    for (double a : coefficients) {
        if (!std::isfinite(a)) throw InputError("non-finite polynomial coefficient");
    }
    if (coefficients.back() == 0.0) throw InputError("leading coefficient is zero");

    RootResult out;
    std::size_t low = 0;
    while (coefficients[low] == 0.0) {
        out.roots.emplace_back(0.0, 0.0);
        ++low;
    }
    const std::span<const double> b = coefficients.subspan(low);
    const std::size_t n = b.size() - 1;
    out.converged = true;
    if (n == 1) {
        out.roots.emplace_back(-b[0] / b[1], 0.0);
    } else if (n > 1) {
        const double log_s = (std::log(std::abs(b[0])) - std::log(std::abs(b[n]))) / static_cast<double>(n);
        const double s = std::exp(log_s);
        std::vector<cplx> c(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            c[i] = (b[i] / b[n]) * std::exp((static_cast<double>(i) - static_cast<double>(n)) * log_s);
        }
        std::vector<cplx> y(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n) + 0.4;
            y[k] = std::polar(1.0, angle);
        }
        std::vector<char> done(n, 0);
        std::size_t remaining = n;
        int it = 0;
        for (; it < opts.max_iterations && remaining > 0; ++it) {
            for (std::size_t k = 0; k < n; ++k) {
                if (done[k]) continue;
                bool settled = false;
                const cplx r = newton_ratio(c, y[k], settled);
                if (r == 0.0) {
                    done[k] = 1;
                    --remaining;
                    continue;
                }
                cplx sum = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != k) sum += 1.0 / (y[k] - y[j]);
                }
                cplx w = r / (1.0 - r * sum);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = r;
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = cplx(1e-3, 1e-3) * (1.0 + std::abs(y[k]));
                y[k] -= w;
                if (settled || std::abs(w) <= 4.0 * kEps * std::abs(y[k])) {
                    done[k] = 1;
                    --remaining;
                }
            }
        }
        out.iterations = it;
        out.converged = remaining == 0;
        for (std::size_t k = 0; k < n; ++k) {
            cplx z = s * y[k];
            double res = relative_residual(b, z);
            for (int p = 0; p < opts.polish_steps && res > 0.0; ++p) {
                const HornerValue h = horner_real(b, z);
                if (h.dp == 0.0) break;
                const cplx cand = z - h.p / h.dp;
                const double cand_res = relative_residual(b, cand);
                if (!(cand_res < res)) break;
                z = cand;
                res = cand_res;
            }
            out.roots.push_back(z);
        }
    }
    for (const cplx& r : out.roots) out.max_residual = std::max(out.max_residual, relative_residual(coefficients, r));
    return out;
}

RootClassification classify_roots(std::span<const cplx> roots, double tau) {
    RootClassification out;
    std::vector<cplx> upper;
    std::vector<cplx> lower;
    for (const cplx& r : roots) {
        if (std::abs(r.imag()) <= tau * (1.0 + std::abs(r.real()))) {
            out.real_roots.push_back(r.real());
        } else if (r.imag() > 0.0) {
            upper.push_back(r);
        } else {
            lower.push_back(r);
        }
    }
    auto margin = [](const cplx& r) { return std::abs(r.imag()) / (1.0 + std::abs(r.real())); };
    while (upper.size() != lower.size()) {
        auto& side = upper.size() > lower.size() ? upper : lower;
        const auto it = std::min_element(side.begin(), side.end(),
                                         [&](const cplx& a, const cplx& b) { return margin(a) < margin(b); });
        out.real_roots.push_back(it->real());
        side.erase(it);
        ++out.reclassified;
    }
    auto by_position = [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(upper.begin(), upper.end(), by_position);
    std::vector<char> used(lower.size(), 0);
    for (const cplx& u : upper) {
        std::size_t best = lower.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(u - std::conj(lower[j]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        used[best] = 1;
        if (best_dist > 1e-5 * (1.0 + std::abs(u))) out.flagged = true;
        out.complex_pairs.push_back(0.5 * (u + std::conj(lower[best])));
    }
    std::sort(out.real_roots.begin(), out.real_roots.end());
    std::sort(out.complex_pairs.begin(), out.complex_pairs.end(), by_position);
    return out;
}

// ---------------------------------------------------------------------------

ZeroSample analyse_polynomial(std::span<const double> coefficients, const LabOptions& opts) {
    ZeroSample s;
    s.coefficients.assign(coefficients.begin(), coefficients.end());
    const RootResult roots = find_roots(coefficients, opts.roots);
    RootClassification cls = classify_roots(roots.roots, opts.tau);
    s.real_roots = std::move(cls.real_roots);
    s.complex_pairs = std::move(cls.complex_pairs);
    s.max_residual = roots.max_residual;
    s.reclassified = cls.reclassified;
    s.flagged = !roots.converged || cls.flagged || !(roots.max_residual <= opts.residual_threshold);
    return s;
}

ZeroSample draw_sample(const CoefficientModel& model, std::uint64_t seed, std::uint64_t index, const LabOptions& opts) {
    RandomStream rng(seed, StreamId::lab_coefficients, index);
    const int n = model.degree();
    std::vector<double> a(static_cast<std::size_t>(n + 1));
    do {
        for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = model.density(i).sample(rng);
    } while (std::abs(a.back()) < 1e-300);
    ZeroSample s = analyse_polynomial(a, opts);
    s.index = index;
    return s;
}

std::string sample_json_line(const ZeroSample& s) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const cplx& z : s.complex_pairs) pairs.push_back({z.real(), z.imag()});
    nlohmann::json j;
    j["index"] = s.index;
    j["coefficients"] = s.coefficients;
    j["real_roots"] = s.real_roots;
    j["complex_pairs"] = std::move(pairs);
    j["residual"] = s.max_residual;
    j["flagged"] = s.flagged;
    return j.dump();
}

// ---------------------------------------------------------------------------

namespace {

bool overlaps(double a_lo, double a_hi, double b_lo, double b_hi) { return std::max(a_lo, b_lo) < std::min(a_hi, b_hi); }

} // namespace

BoxFamily::BoxFamily(std::vector<Interval> intervals, std::vector<Rectangle> rectangles)
    : intervals_(std::move(intervals)), rectangles_(std::move(rectangles)) {
    for (const Interval& iv : intervals_) {
        if (!(iv.lo < iv.hi)) throw InputError("interval needs lo < hi");
    }
    for (const Rectangle& r : rectangles_) {
        if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi)) throw InputError("rectangle needs lo < hi on both axes");
        if (!(r.im_lo > 0.0)) throw InputError("rectangles must lie strictly above the real axis");
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        for (std::size_t j = i + 1; j < intervals_.size(); ++j) {
            if (overlaps(intervals_[i].lo, intervals_[i].hi, intervals_[j].lo, intervals_[j].hi)) {
                throw InputError("intervals " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            }
        }
    }
    for (std::size_t i = 0; i < rectangles_.size(); ++i) {
        for (std::size_t j = i + 1; j < rectangles_.size(); ++j) {
            const Rectangle& a = rectangles_[i];
            const Rectangle& b = rectangles_[j];
            if (overlaps(a.re_lo, a.re_hi, b.re_lo, b.re_hi) && overlaps(a.im_lo, a.im_hi, b.im_lo, b.im_hi)) {
                throw InputError("rectangles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            }
        }
    }
}

int count_in(const ZeroSample& s, const Interval& iv) {
    int c = 0;
    for (double x : s.real_roots) c += (x >= iv.lo && x < iv.hi) ? 1 : 0;
    return c;
}

int count_in(const ZeroSample& s, const Rectangle& r) {
    int c = 0;
    for (const cplx& z : s.complex_pairs) {
        c += (z.real() >= r.re_lo && z.real() < r.re_hi && z.imag() >= r.im_lo && z.imag() < r.im_hi) ? 1 : 0;
    }
    return c;
}

double BoxFamily::count_product(const ZeroSample& s) const {
    double p = 1.0;
    for (const Interval& iv : intervals_) {
        p *= count_in(s, iv);
        if (p == 0.0) return 0.0;
    }
    for (const Rectangle& r : rectangles_) {
        p *= count_in(s, r);
        if (p == 0.0) return 0.0;
    }
    return p;
}

// ---------------------------------------------------------------------------

namespace {

struct ChunkResult {
    std::vector<MomentAccumulator> real;
    std::vector<MomentAccumulator> complex;
    std::vector<MomentAccumulator> boxes;
    std::vector<std::uint64_t> histogram;
    LabDiagnostics diagnostics;
    std::string dump;
};

constexpr std::uint64_t kDumpWindowChunks = 64;

double measure(const Interval& iv) { return iv.hi - iv.lo; }
double measure(const Rectangle& r) { return (r.re_hi - r.re_lo) * (r.im_hi - r.im_lo); }

CellEstimate density_from(const MomentAccumulator& acc, double area) {
    if (!std::isfinite(area)) return {};
    return {acc.mean() / area, acc.std_error() / area};
}

} // namespace

SimulationReport simulate(const CoefficientModel& model, const SimulationRequest& request, const LabOptions& opts) {
    if (request.samples == 0) throw InputError("simulation needs at least one sample");
    for (const Interval& iv : request.real_cells) {
        if (!(iv.lo < iv.hi)) throw InputError("cell needs lo < hi");
    }
    for (const Rectangle& r : request.complex_cells) {
        if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi)) throw InputError("cell needs lo < hi on both axes");
    }
    const int n = model.degree();
    const unsigned workers = resolve_workers(opts.workers);
    const bool dumping = request.dump != nullptr;

    auto process = [&](std::uint64_t offset, std::uint64_t count) {
        return run_chunks<ChunkResult>(count, workers, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            ChunkResult c;
            c.real.resize(request.real_cells.size());
            c.complex.resize(request.complex_cells.size());
            c.boxes.resize(request.boxes.size());
            c.histogram.assign(static_cast<std::size_t>(n + 1), 0);
            for (std::uint64_t i = offset + begin; i < offset + end; ++i) {
                const ZeroSample s = draw_sample(model, request.seed, i, opts);
                ++c.diagnostics.samples;
                c.diagnostics.max_residual = std::max(c.diagnostics.max_residual, s.max_residual);
                if (s.reclassified) ++c.diagnostics.reclassified;
                if (dumping) {
                    c.dump += sample_json_line(s);
                    c.dump += '\n';
                }
                if (s.flagged) {
                    ++c.diagnostics.flagged;
                    continue;
                }
                for (std::size_t j = 0; j < request.real_cells.size(); ++j) {
                    c.real[j].add(count_in(s, request.real_cells[j]));
                }
                for (std::size_t j = 0; j < request.complex_cells.size(); ++j) {
                    c.complex[j].add(count_in(s, request.complex_cells[j]));
                }
                for (std::size_t j = 0; j < request.boxes.size(); ++j) {
                    c.boxes[j].add(request.boxes[j].count_product(s));
                }
                ++c.histogram[s.real_roots.size()];
            }
            return c;
        });
    };

    ChunkResult total;
    total.real.resize(request.real_cells.size());
    total.complex.resize(request.complex_cells.size());
    total.boxes.resize(request.boxes.size());
    total.histogram.assign(static_cast<std::size_t>(n + 1), 0);
    auto merge = [&](const ChunkResult& c) {
        for (std::size_t j = 0; j < c.real.size(); ++j) total.real[j].merge(c.real[j]);
        for (std::size_t j = 0; j < c.complex.size(); ++j) total.complex[j].merge(c.complex[j]);
        for (std::size_t j = 0; j < c.boxes.size(); ++j) total.boxes[j].merge(c.boxes[j]);
        for (std::size_t j = 0; j < c.histogram.size(); ++j) total.histogram[j] += c.histogram[j];
        total.diagnostics.samples += c.diagnostics.samples;
        total.diagnostics.flagged += c.diagnostics.flagged;
        total.diagnostics.reclassified += c.diagnostics.reclassified;
        total.diagnostics.max_residual = std::max(total.diagnostics.max_residual, c.diagnostics.max_residual);
        if (dumping) *request.dump << c.dump;
    };
    if (dumping) {
        const std::uint64_t window = kDumpWindowChunks * kChunkSize;
        for (std::uint64_t offset = 0; offset < request.samples; offset += window) {
            for (const ChunkResult& c : process(offset, std::min(window, request.samples - offset))) merge(c);
        }
    } else {
        for (const ChunkResult& c : process(0, request.samples)) merge(c);
    }

    SimulationReport report;
    report.diagnostics = total.diagnostics;
    for (std::size_t j = 0; j < request.real_cells.size(); ++j) {
        report.real_mass.push_back(density_from(total.real[j], 1.0));
        report.real_density.push_back(density_from(total.real[j], measure(request.real_cells[j])));
    }
    for (std::size_t j = 0; j < request.complex_cells.size(); ++j) {
        report.complex_mass.push_back(density_from(total.complex[j], 1.0));
        report.complex_density.push_back(density_from(total.complex[j], measure(request.complex_cells[j])));
    }
    for (const MomentAccumulator& acc : total.boxes) {
        IntegralEstimate e;
        e.backend = Backend::monte_carlo;
        e.value = acc.mean();
        e.error = acc.std_error();
        e.effort = acc.count;
        report.moments.push_back(e);
    }
    if (request.pmf) {
        const std::uint64_t used = total.diagnostics.samples - total.diagnostics.flagged;
        for (int c = n; c >= 0; c -= 2) {
            const double p = used ? static_cast<double>(total.histogram[static_cast<std::size_t>(c)]) / static_cast<double>(used) : 0.0;
            report.pmf.counts.push_back(c);
            report.pmf.probability.push_back(p);
            report.pmf.error.push_back(used ? std::sqrt(p * (1.0 - p) / static_cast<double>(used)) : 0.0);
        }
    }
    return report;
}

std::vector<CellEstimate> estimate_density(const CoefficientModel& model, std::span<const Interval> cells,
                                           std::uint64_t samples, std::uint64_t seed, const LabOptions& opts) {
    for (const Interval& iv : cells) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw InputError("density cells must be bounded");
    }
    SimulationRequest req;
    req.samples = samples;
    req.seed = seed;
    req.real_cells.assign(cells.begin(), cells.end());
    return simulate(model, req, opts).real_density;
}

std::vector<CellEstimate> estimate_density(const CoefficientModel& model, std::span<const Rectangle> cells,
                                           std::uint64_t samples, std::uint64_t seed, const LabOptions& opts) {
    for (const Rectangle& r : cells) {
        if (!std::isfinite(measure(r))) throw InputError("density cells must be bounded");
        if (r.im_lo < 0.0) throw InputError("complex cells must lie in the upper half-plane");
    }
    SimulationRequest req;
    req.samples = samples;
    req.seed = seed;
    req.complex_cells.assign(cells.begin(), cells.end());
    return simulate(model, req, opts).complex_density;
}

IntegralEstimate estimate_mixed_moment(const CoefficientModel& model, const BoxFamily& boxes, std::uint64_t samples,
                                       std::uint64_t seed, const LabOptions& opts) {
    if (boxes.empty()) throw InputError("box family is empty");
    SimulationRequest req;
    req.samples = samples;
    req.seed = seed;
    req.boxes.push_back(boxes);
    return simulate(model, req, opts).moments.front();
}

RealCountPmf real_count_pmf(const CoefficientModel& model, std::uint64_t samples, std::uint64_t seed,
                            const LabOptions& opts) {
    SimulationRequest req;
    req.samples = samples;
    req.seed = seed;
    req.pmf = true;
    return simulate(model, req, opts).pmf;
}

// ---------------------------------------------------------------------------

Comparison compare(std::string name, const IntegralEstimate& analytic, const IntegralEstimate& empirical,
                   double threshold) {
    Comparison c;
    c.name = std::move(name);
    c.analytic = analytic.value;
    c.analytic_error = analytic.error;
    c.empirical = empirical.value;
    c.empirical_error = empirical.error;
    const double spread = std::hypot(analytic.error, empirical.error);
    if (spread == 0.0) {
        c.z_score = analytic.value == empirical.value ? 0.0 : std::numeric_limits<double>::infinity();
        c.pass = analytic.value == empirical.value;
    } else {
        c.z_score = (analytic.value - empirical.value) / spread;
        c.pass = std::abs(c.z_score) < threshold;
    }
    return c;
}

bool ValidationReport::passed() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.pass; });
}

ValidationReport validation_report(const CoefficientModel& model, std::span<const ComparisonSpec> specs,
                                   const ValidationSettings& settings) {
    ValidationReport report;
    if (specs.empty()) return report;
    const int n = model.degree();

    BackendSettings adaptive;
    adaptive.backend = Backend::adaptive;
    adaptive.tolerance = settings.tolerance;
    adaptive.workers = settings.lab.workers;
    BackendSettings sampled = adaptive;
    sampled.backend = Backend::monte_carlo;
    sampled.samples = settings.analytic_samples;
    sampled.seed = settings.seed;
    auto settings_for = [&](int m) { return (m <= 2 && n - m + 1 <= 2) ? adaptive : sampled; };

    SimulationRequest req;
    req.samples = settings.samples;
    req.seed = settings.seed;
    std::vector<IntegralEstimate> analytic;
    std::vector<std::size_t> slot;
    for (const ComparisonSpec& s : specs) {
        switch (s.kind) {
        case ComparisonSpec::Kind::real_mass: {
            const std::array<Interval, 1> sets{s.interval};
            analytic.push_back(integrate_correlation(model, sets, {}, settings_for(1)));
            slot.push_back(req.real_cells.size());
            req.real_cells.push_back(s.interval);
            break;
        }
        case ComparisonSpec::Kind::complex_mass: {
            const std::array<Rectangle, 1> sets{s.rectangle};
            analytic.push_back(n < 2 ? IntegralEstimate{} : integrate_correlation(model, {}, sets, settings_for(2)));
            slot.push_back(req.complex_cells.size());
            req.complex_cells.push_back(s.rectangle);
            break;
        }
        case ComparisonSpec::Kind::mixed_moment: {
            const int m = static_cast<int>(s.boxes.intervals().size() + 2 * s.boxes.rectangles().size());
            analytic.push_back(m > n ? IntegralEstimate{}
                                     : integrate_correlation(model, s.boxes.intervals(), s.boxes.rectangles(),
                                                             settings_for(m)));
            slot.push_back(req.boxes.size());
            req.boxes.push_back(s.boxes);
            break;
        }
        case ComparisonSpec::Kind::real_count: {
            analytic.push_back(prob_real_count(model, s.pairs, n <= 3 ? adaptive : sampled));
            slot.push_back(static_cast<std::size_t>(s.pairs));
            req.pmf = true;
            break;
        }
        }
    }

    const SimulationReport sim = simulate(model, req, settings.lab);
    report.diagnostics = sim.diagnostics;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ComparisonSpec& s = specs[i];
        IntegralEstimate emp;
        emp.backend = Backend::monte_carlo;
        emp.effort = sim.diagnostics.samples - sim.diagnostics.flagged;
        switch (s.kind) {
        case ComparisonSpec::Kind::real_mass: {
            emp.value = sim.real_mass[slot[i]].value;
            emp.error = sim.real_mass[slot[i]].error;
            break;
        }
        case ComparisonSpec::Kind::complex_mass: {
            emp.value = sim.complex_mass[slot[i]].value;
            emp.error = sim.complex_mass[slot[i]].error;
            break;
        }
        case ComparisonSpec::Kind::mixed_moment:
            emp = sim.moments[slot[i]];
            break;
        case ComparisonSpec::Kind::real_count:
            emp.value = sim.pmf.probability[slot[i]];
            emp.error = sim.pmf.error[slot[i]];
            break;
        }
        report.comparisons.push_back(compare(s.name, analytic[i], emp));
    }
    return report;
}

} // namespace zerocorr
