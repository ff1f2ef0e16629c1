#include "zerocorr/quadrature.hpp"

#include "zerocorr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace zerocorr {

namespace {

// Kronrod abscissae (descending), Kronrod weights, and the Gauss weights that
// belong to the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Panels are split slightly off centre so that repeated subdivision does not
// keep landing on round numbers, where kinks of typical integrands live.
constexpr double kSplit = 0.4637;

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

Panel gk15(const Integrand1D& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double v1 = f(centre - dx);
        const double v2 = f(centre + dx);
        f1[static_cast<std::size_t>(j)] = v1;
        f2[static_cast<std::size_t>(j)] = v2;
        resk += kWgk[static_cast<std::size_t>(j)] * (v1 + v2);
        resabs += kWgk[static_cast<std::size_t>(j)] * (std::abs(v1) + std::abs(v2));
        if (j % 2 == 1) {
            resg += kWg[static_cast<std::size_t>(j / 2)] * (v1 + v2);
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double h = std::abs(half);
    resk *= half;
    resabs *= h;
    resasc *= h;
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, resk, err};
}

bool worse(const Panel& x, const Panel& y) {
    // max-heap on error; deterministic tie-break by position
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
}

} // namespace

QuadratureResult integrate_gk(const Integrand1D& f, std::span<const double> knots,
                              const QuadratureOptions& opts) {
    if (knots.size() < 2) {
        throw InputError("quadrature needs at least two knots");
    }
    QuadratureResult out;
    std::vector<Panel> heap;
    std::vector<Panel> finished;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1] > knots[i])) continue;
        const std::size_t splits = std::max<std::size_t>(1, opts.initial_splits);
        const double width = (knots[i + 1] - knots[i]) / static_cast<double>(splits);
        for (std::size_t s = 0; s < splits; ++s) {
            const double a = knots[i] + static_cast<double>(s) * width;
            const double b = s + 1 == splits ? knots[i + 1] : a + width;
            heap.push_back(gk15(f, a, b));
            out.evaluations += 15;
        }
    }
    std::make_heap(heap.begin(), heap.end(), worse);

    auto totals = [&] {
        double v = 0.0;
        double e = 0.0;
        for (const Panel& p : heap) {
            v += p.value;
            e += p.error;
        }
        for (const Panel& p : finished) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    while (!heap.empty() && heap.size() + finished.size() < opts.max_intervals) {
        if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) break;
        std::pop_heap(heap.begin(), heap.end(), worse);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = worst.a + kSplit * (worst.b - worst.a);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 1e-13 * std::max(1.0, std::abs(mid))) {
            finished.push_back(worst);
            continue;
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
    }

    // Re-sum in positional order so the result does not depend on heap layout.
    std::vector<Panel> all = std::move(heap);
    all.insert(all.end(), finished.begin(), finished.end());
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : all) {
        out.value += p.value;
        out.error += p.error;
    }
    return out;
}

QuadratureResult integrate_gk(const Integrand1D& f, double a, double b, const QuadratureOptions& opts) {
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_gk(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    const std::array<double, 2> knots{a, b};
    return integrate_gk(f, knots, opts);
}

QuadratureResult integrate_line(const Integrand1D& f, double lo, double hi, std::span<const double> knots,
                                const QuadratureOptions& opts) {
    if (!(lo < hi)) return {};
    const double half_pi = 0.5 * std::numbers::pi;
    auto to_angle = [&](double x) {
        if (x == std::numeric_limits<double>::infinity()) return half_pi;
        if (x == -std::numeric_limits<double>::infinity()) return -half_pi;
        return std::atan(x);
    };
    std::vector<double> angles{to_angle(lo), to_angle(hi)};
    for (double k : knots) {
        if (k > lo && k < hi) angles.push_back(std::atan(k));
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    const Integrand1D g = [&f](double theta) {
        const double x = std::tan(theta);
        if (!std::isfinite(x)) return 0.0;
        const double c = std::cos(theta);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx / (c * c);
    };
    return integrate_gk(g, angles, opts);
}

} // namespace zerocorr
