#include "zerocorr/scenarios.hpp"

#include "zerocorr/error.hpp"

#include <array>
#include <limits>

namespace zerocorr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20240611;

ComparisonSpec real_mass(std::string name, double lo, double hi) {
    ComparisonSpec s;
    s.kind = ComparisonSpec::Kind::real_mass;
    s.name = std::move(name);
    s.interval = {lo, hi};
    return s;
}

ComparisonSpec complex_mass(std::string name, Rectangle r) {
    ComparisonSpec s;
    s.kind = ComparisonSpec::Kind::complex_mass;
    s.name = std::move(name);
    s.rectangle = r;
    return s;
}

ComparisonSpec mixed(std::string name, std::vector<Interval> iv, std::vector<Rectangle> rs) {
    ComparisonSpec s;
    s.kind = ComparisonSpec::Kind::mixed_moment;
    s.name = std::move(name);
    s.boxes = BoxFamily(std::move(iv), std::move(rs));
    return s;
}

ComparisonSpec real_count(std::string name, int pairs) {
    ComparisonSpec s;
    s.kind = ComparisonSpec::Kind::real_count;
    s.name = std::move(name);
    s.pairs = pairs;
    return s;
}

Scenario base(std::string name, std::string description, CoefficientModel model) {
    Scenario s{std::move(name), std::move(description), std::move(model), {}, {}};
    s.settings.samples = 100000;
    s.settings.seed = kSeed;
    return s;
}

CoefficientModel gaussian(int n) { return CoefficientModel::iid(n, CoefficientDensity::gaussian(1.0)); }
CoefficientModel uniform(int n) { return CoefficientModel::iid(n, CoefficientDensity::uniform(-1.0, 1.0)); }
CoefficientModel exponential(int n) { return CoefficientModel::iid(n, CoefficientDensity::exponential(1.0)); }

const std::array<std::string_view, 8> kNames = {
    "n1-gaussian", "n1-uniform", "n1-exponential", "n2-gaussian",
    "n2-uniform",  "n2-exponential", "n3-gaussian", "n5-gaussian-mixed",
};

} // namespace

std::vector<std::string> scenario_names() { return {kNames.begin(), kNames.end()}; }

Scenario make_scenario(std::string_view name) {
    if (name == "n1-gaussian") {
        Scenario s = base("n1-gaussian", "degree 1, standard normal coefficients (Cauchy zero)", gaussian(1));
        s.comparisons = {real_mass("mass[-0.1,0.1)", -0.1, 0.1), real_mass("mass[0.5,2)", 0.5, 2.0),
                         real_mass("mass(-inf,-1)", -kInf, -1.0), complex_mass("complex mass", {-1, 1, 0.1, 1}),
                         real_count("P(1 real)", 0)};
        return s;
    }
    if (name == "n1-uniform") {
        Scenario s = base("n1-uniform", "degree 1, uniform(-1, 1) coefficients", uniform(1));
        s.comparisons = {real_mass("mass[-0.5,0.5)", -0.5, 0.5), real_mass("mass[1,3)", 1.0, 3.0),
                         real_mass("mass[3,inf)", 3.0, kInf), real_count("P(1 real)", 0)};
        return s;
    }
    if (name == "n1-exponential") {
        Scenario s = base("n1-exponential", "degree 1, rate-1 exponential coefficients", exponential(1));
        s.comparisons = {real_mass("mass[-1,0)", -1.0, 0.0), real_mass("mass(-inf,-2)", -kInf, -2.0),
                         real_mass("mass[0,5)", 0.0, 5.0), real_count("P(1 real)", 0)};
        return s;
    }
    if (name == "n2-gaussian") {
        Scenario s = base("n2-gaussian", "degree 2, standard normal coefficients", gaussian(2));
        s.comparisons = {real_mass("mass[-1,1)", -1.0, 1.0),
                         complex_mass("complex mass [-1,1)x[0.2,1.5)", {-1, 1, 0.2, 1.5}),
                         mixed("E[mu(-1,0) mu(0,1)]", {{-1.0, 0.0}, {0.0, 1.0}}, {}),
                         real_count("P(2 real)", 0), real_count("P(0 real)", 1)};
        return s;
    }
    if (name == "n2-uniform") {
        Scenario s = base("n2-uniform", "degree 2, uniform(-1, 1) coefficients", uniform(2));
        s.comparisons = {real_mass("mass[-1,1)", -1.0, 1.0),
                         complex_mass("complex mass [-1,1)x[0.2,1.5)", {-1, 1, 0.2, 1.5}),
                         mixed("E[mu(-1,0) mu(0,1)]", {{-1.0, 0.0}, {0.0, 1.0}}, {}),
                         real_count("P(2 real)", 0), real_count("P(0 real)", 1)};
        return s;
    }
    if (name == "n2-exponential") {
        Scenario s = base("n2-exponential", "degree 2, rate-1 exponential coefficients", exponential(2));
        s.comparisons = {real_mass("mass[-2,-0.5)", -2.0, -0.5), real_mass("mass[0,inf)", 0.0, kInf),
                         complex_mass("complex mass [-1,1)x[0.2,1.5)", {-1, 1, 0.2, 1.5}),
                         real_count("P(2 real)", 0), real_count("P(0 real)", 1)};
        return s;
    }
    if (name == "n3-gaussian") {
        Scenario s = base("n3-gaussian", "degree 3, standard normal coefficients", gaussian(3));
        s.comparisons = {real_mass("mass[0,1)", 0.0, 1.0), complex_mass("complex mass [0,1)x[0.2,1.2)", {0, 1, 0.2, 1.2}),
                         real_count("P(3 real)", 0), real_count("P(1 real)", 1)};
        return s;
    }
    if (name == "n5-gaussian-mixed") {
        Scenario s = base("n5-gaussian-mixed", "degree 5, standard normal coefficients, real-complex mixed moment",
                          gaussian(5));
        const Interval b1{0.0, 1.0};
        const Rectangle b2{0.0, 1.0, 0.2, 1.2};
        s.comparisons = {real_mass("mass[0,1)", b1.lo, b1.hi), complex_mass("complex mass [0,1)x[0.2,1.2)", b2),
                         mixed("E[mu(B1) mu(B2)]", {b1}, {b2})};
        return s;
    }
    throw InputError("unknown scenario '" + std::string(name) + "'");
}

ValidationReport run_scenario(const Scenario& scenario) {
    ValidationReport r = validation_report(scenario.model, scenario.comparisons, scenario.settings);
    r.scenario = scenario.name;
    return r;
}

} // namespace zerocorr
