#include "zerocorr/cli.hpp"

#include "zerocorr/closed_forms.hpp"
#include "zerocorr/engine.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/json_io.hpp"
#include "zerocorr/lab.hpp"
#include "zerocorr/scenarios.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace zerocorr {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
    std::string config_path;
    std::vector<std::string> sets;
    unsigned workers = 0;
    std::string out;
    bool list = false;
    std::vector<std::string> scenarios;
};

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json load_config(const Options& opt) {
    json cfg = json::object();
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path, std::ios::binary);
        if (!in) throw InputError("cannot read config file '" + opt.config_path + "'");
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw InputError(std::string("malformed JSON config: ") + e.what());
        }
    }
    if (!cfg.is_object()) throw InputError("config must be a JSON object");
    for (const std::string& set : opt.sets) {
        const auto eq = set.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--set expects key=value, got '" + set + "'");
        const std::string key = set.substr(0, eq);
        const std::string text = set.substr(eq + 1);
        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        std::string pointer = "/" + key;
        for (char& c : pointer) {
            if (c == '.') c = '/';
        }
        try {
            cfg[json::json_pointer(pointer)] = std::move(value);
        } catch (const json::exception& e) {
            throw InputError("cannot apply --set " + key + ": " + e.what());
        }
    }
    return cfg;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write output file '" + path + "'");
    f << text;
    if (!f) throw InputError("failed writing output file '" + path + "'");
}

std::string output_path(const Options& opt, const json& cfg) {
    if (!opt.out.empty()) return opt.out;
    if (cfg.contains("output")) {
        if (!cfg.at("output").is_string()) throw InputError("'output' must be a path string");
        return cfg.at("output").get<std::string>();
    }
    return {};
}

const json& need(const json& cfg, const char* key) {
    if (!cfg.contains(key)) throw InputError(std::string("config is missing '") + key + "'");
    return cfg.at(key);
}

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
    return v;
}

// Number or one of "inf", "+inf", "-inf".
double bound(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw InputError("bad bound '" + s + "'");
    }
    if (!j.is_number()) throw InputError("bounds must be numbers or \"inf\"/\"-inf\"");
    return j.get<double>();
}

json bound_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

unsigned workers_from(const Options& opt, const json& cfg) {
    if (opt.workers != 0) return opt.workers;
    if (cfg.contains("workers")) {
        const json& w = cfg.at("workers");
        if (!w.is_number_integer() || w.get<std::int64_t>() < 0) throw InputError("'workers' must be a non-negative integer");
        return static_cast<unsigned>(w.get<std::int64_t>());
    }
    return 0;
}

BackendSettings settings_from(const json& cfg, unsigned workers) {
    const json backend = cfg.contains("backend") ? cfg.at("backend") : json();
    BackendSettings s = backend_from_json(backend);
    if (s.backend != Backend::adaptive && !backend.contains("seed")) {
        throw InputError("backend '" + std::string(to_string(s.backend)) + "' needs a seed");
    }
    s.workers = workers;
    return s;
}

std::vector<double> progression(const json& g, const char* what) {
    if (!g.is_object()) throw InputError(std::string(what) + " must be an object");
    if (g.contains("points")) {
        const json& p = g.at("points");
        if (!p.is_array()) throw InputError(std::string(what) + ".points must be an array");
        std::vector<double> out;
        for (const json& v : p) out.push_back(finite_number(v, "grid point"));
        return out;
    }
    const double start = finite_number(need(g, "start"), "grid start");
    const double stop = finite_number(need(g, "stop"), "grid stop");
    const double step = finite_number(need(g, "step"), "grid step");
    if (!(step > 0.0)) throw InputError("grid step must be positive");
    if (start > stop) return {};
    const double span = (stop - start) / step;
    if (span > 1e7) throw InputError("grid has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

Interval interval_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("interval must be [lo, hi]");
    const Interval iv{bound(j[0]), bound(j[1])};
    if (!(iv.lo < iv.hi)) throw InputError("interval needs lo < hi");
    return iv;
}

Rectangle rectangle_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw InputError("rectangle must be [re_lo, re_hi, im_lo, im_hi]");
    const Rectangle r{bound(j[0]), bound(j[1]), bound(j[2]), bound(j[3])};
    if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi)) throw InputError("rectangle needs lo < hi on both axes");
    return r;
}

json estimate_json(const IntegralEstimate& e) {
    return {{"value", e.value}, {"error", e.error}, {"backend", std::string(to_string(e.backend))}, {"effort", e.effort}};
}

// ---------------------------------------------------------------------------

int cmd_density_real(const json& cfg, const Options& opt, std::ostream& out) {
    const CoefficientModel model = model_from_json(need(cfg, "model"));
    const BackendSettings settings = settings_from(cfg, workers_from(opt, cfg));
    const std::vector<double> xs = progression(need(cfg, "grid"), "grid");
    std::string csv = "x,value,error,backend,effort\n";
    for (double x : xs) {
        const IntegralEstimate e = rho_real_density(model, x, settings);
        csv += fmt(x) + ',' + fmt(e.value) + ',' + fmt(e.error) + ',' + std::string(to_string(e.backend)) + ',' +
               std::to_string(e.effort) + '\n';
    }
    emit(csv, output_path(opt, cfg), out);
    return exit_success;
}

int cmd_density_complex(const json& cfg, const Options& opt, std::ostream& out) {
    const CoefficientModel model = model_from_json(need(cfg, "model"));
    const BackendSettings settings = settings_from(cfg, workers_from(opt, cfg));
    const json& grid = need(cfg, "grid");
    std::vector<cplx> points;
    if (grid.is_object() && grid.contains("points") && !grid.contains("re")) {
        const json& p = grid.at("points");
        if (!p.is_array()) throw InputError("grid.points must be an array");
        for (const json& z : p) {
            if (!z.is_array() || z.size() != 2) throw InputError("complex grid points are [re, im]");
            points.emplace_back(finite_number(z[0], "re"), finite_number(z[1], "im"));
        }
    } else {
        if (!grid.is_object()) throw InputError("grid must be an object");
        const std::vector<double> re = progression(need(grid, "re"), "grid.re");
        const std::vector<double> im = progression(need(grid, "im"), "grid.im");
        for (double a : re) {
            for (double b : im) points.emplace_back(a, b);
        }
    }
    for (const cplx& z : points) {
        if (!(z.imag() > 0.0)) throw InputError("complex grid touches or crosses Im = 0");
    }
    std::string csv = "re,im,value,error\n";
    for (const cplx& z : points) {
        const IntegralEstimate e = rho_complex_density(model, z, settings);
        csv += fmt(z.real()) + ',' + fmt(z.imag()) + ',' + fmt(e.value) + ',' + fmt(e.error) + '\n';
    }
    emit(csv, output_path(opt, cfg), out);
    return exit_success;
}

int cmd_correlation(const json& cfg, const Options& opt, std::ostream& out) {
    const CoefficientModel model = model_from_json(need(cfg, "model"));
    const BackendSettings settings = settings_from(cfg, workers_from(opt, cfg));
    const json& list = need(cfg, "configurations");
    if (!list.is_array()) throw InputError("'configurations' must be an array");
    std::vector<ZeroConfiguration> cfgs;
    for (const json& c : list) {
        if (!c.is_object()) throw InputError("each configuration must be an object");
        std::vector<double> xs;
        std::vector<cplx> zs;
        if (c.contains("real")) {
            if (!c.at("real").is_array()) throw InputError("'real' must be an array");
            for (const json& x : c.at("real")) xs.push_back(finite_number(x, "real point"));
        }
        if (c.contains("complex")) {
            if (!c.at("complex").is_array()) throw InputError("'complex' must be an array");
            for (const json& z : c.at("complex")) {
                if (!z.is_array() || z.size() != 2) throw InputError("complex points are [re, im]");
                zs.emplace_back(finite_number(z[0], "re"), finite_number(z[1], "im"));
            }
        }
        ZeroConfiguration zc(std::move(xs), std::move(zs));
        if (zc.m() == 0) throw InputError("configuration has no points");
        if (zc.m() > model.degree()) {
            throw DimensionError("configuration has k + 2l = " + std::to_string(zc.m()) + " > n = " +
                                 std::to_string(model.degree()));
        }
        cfgs.push_back(std::move(zc));
    }
    json results = json::array();
    for (const ZeroConfiguration& zc : cfgs) {
        json entry;
        entry["real"] = std::vector<double>(zc.real_points().begin(), zc.real_points().end());
        json zs = json::array();
        for (const cplx& z : zc.complex_points()) zs.push_back({z.real(), z.imag()});
        entry["complex"] = std::move(zs);
        entry.update(estimate_json(rho_kl(model, zc, settings)));
        results.push_back(std::move(entry));
    }
    const json report{{"command", "correlation"}, {"degree", model.degree()}, {"results", std::move(results)}};
    emit(report.dump(2) + '\n', output_path(opt, cfg), out);
    return exit_success;
}

int cmd_real_count(const json& cfg, const Options& opt, std::ostream& out) {
    const CoefficientModel model = model_from_json(need(cfg, "model"));
    const BackendSettings settings = settings_from(cfg, workers_from(opt, cfg));
    const int n = model.degree();
    json probs = json::array();
    double sum = 0.0;
    double var = 0.0;
    for (int l = 0; 2 * l <= n; ++l) {
        const IntegralEstimate e = prob_real_count(model, l, settings);
        json entry{{"real_zeros", n - 2 * l}, {"complex_pairs", l}};
        entry.update(estimate_json(e));
        probs.push_back(std::move(entry));
        sum += e.value;
        var += e.error * e.error;
    }
    const json report{{"command", "real-count"}, {"degree", n},          {"probabilities", std::move(probs)},
                      {"sum", sum},              {"sum_error", std::sqrt(var)}};
    emit(report.dump(2) + '\n', output_path(opt, cfg), out);
    return exit_success;
}

int cmd_simulate(const json& cfg, const Options& opt, std::ostream& out) {
    const CoefficientModel model = model_from_json(need(cfg, "model"));
    SimulationRequest req;
    const json& samples = need(cfg, "samples");
    if (!samples.is_number_integer() || samples.get<std::int64_t>() < 1) {
        throw InputError("'samples' must be a positive integer");
    }
    req.samples = static_cast<std::uint64_t>(samples.get<std::int64_t>());
    const json& seed = need(cfg, "seed");
    if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) throw InputError("'seed' must be a non-negative integer");
    req.seed = seed.get<std::uint64_t>();
    req.pmf = cfg.value("pmf", true);

    if (cfg.contains("cells")) {
        const json& cells = cfg.at("cells");
        if (cells.contains("real")) {
            const json& r = cells.at("real");
            if (r.is_object()) {
                const std::vector<double> edges = progression(r, "cells.real");
                for (std::size_t i = 0; i + 1 < edges.size(); ++i) req.real_cells.push_back({edges[i], edges[i + 1]});
            } else if (r.is_array()) {
                for (const json& iv : r) req.real_cells.push_back(interval_from(iv));
            } else {
                throw InputError("cells.real must be an array or a grid");
            }
        }
        if (cells.contains("complex")) {
            const json& c = cells.at("complex");
            if (!c.is_array()) throw InputError("cells.complex must be an array");
            for (const json& r : c) {
                const Rectangle rect = rectangle_from(r);
                if (rect.im_lo < 0.0) throw InputError("complex cells must lie in the upper half-plane");
                req.complex_cells.push_back(rect);
            }
        }
    }
    if (cfg.contains("boxes")) {
        const json& boxes = cfg.at("boxes");
        if (!boxes.is_array()) throw InputError("'boxes' must be an array");
        for (const json& b : boxes) {
            std::vector<Interval> ivs;
            std::vector<Rectangle> rs;
            if (b.contains("real")) {
                for (const json& iv : b.at("real")) ivs.push_back(interval_from(iv));
            }
            if (b.contains("complex")) {
                for (const json& r : b.at("complex")) rs.push_back(rectangle_from(r));
            }
            BoxFamily family(std::move(ivs), std::move(rs));
            if (family.empty()) throw InputError("box family is empty");
            req.boxes.push_back(std::move(family));
        }
    }

    LabOptions lab;
    lab.workers = workers_from(opt, cfg);
    std::ofstream dump;
    if (cfg.contains("dump")) {
        if (!cfg.at("dump").is_string()) throw InputError("'dump' must be a path string");
        const std::string path = cfg.at("dump").get<std::string>();
        dump.open(path, std::ios::binary);
        if (!dump) throw InputError("cannot write dump file '" + path + "'");
        req.dump = &dump;
    }
    const SimulationReport rep = simulate(model, req, lab);

    json report{{"command", "simulate"}, {"degree", model.degree()}, {"samples", req.samples}, {"seed", req.seed}};
    json real_cells = json::array();
    for (std::size_t i = 0; i < req.real_cells.size(); ++i) {
        real_cells.push_back({{"lo", bound_json(req.real_cells[i].lo)},
                              {"hi", bound_json(req.real_cells[i].hi)},
                              {"mass", rep.real_mass[i].value},
                              {"mass_error", rep.real_mass[i].error},
                              {"density", rep.real_density[i].value},
                              {"density_error", rep.real_density[i].error}});
    }
    report["real_cells"] = std::move(real_cells);
    json complex_cells = json::array();
    for (std::size_t i = 0; i < req.complex_cells.size(); ++i) {
        const Rectangle& r = req.complex_cells[i];
        complex_cells.push_back(
            {{"rectangle", {bound_json(r.re_lo), bound_json(r.re_hi), bound_json(r.im_lo), bound_json(r.im_hi)}},
             {"mass", rep.complex_mass[i].value},
             {"mass_error", rep.complex_mass[i].error},
             {"density", rep.complex_density[i].value},
             {"density_error", rep.complex_density[i].error}});
    }
    report["complex_cells"] = std::move(complex_cells);
    json moments = json::array();
    for (std::size_t i = 0; i < req.boxes.size(); ++i) {
        moments.push_back({{"value", rep.moments[i].value}, {"error", rep.moments[i].error}});
    }
    report["moments"] = std::move(moments);
    json pmf = json::array();
    for (std::size_t i = 0; i < rep.pmf.counts.size(); ++i) {
        pmf.push_back({{"real_zeros", rep.pmf.counts[i]},
                       {"probability", rep.pmf.probability[i]},
                       {"error", rep.pmf.error[i]}});
    }
    report["pmf"] = std::move(pmf);
    report["diagnostics"] = {{"samples", rep.diagnostics.samples},
                             {"flagged", rep.diagnostics.flagged},
                             {"reclassified", rep.diagnostics.reclassified},
                             {"max_residual", rep.diagnostics.max_residual}};
    emit(report.dump(2) + '\n', output_path(opt, cfg), out);
    return exit_success;
}

int cmd_validate(const json& cfg, const Options& opt, std::ostream& out) {
    if (opt.list) {
        for (const std::string& name : scenario_names()) out << name << '\n';
        return exit_success;
    }
    std::vector<std::string> names = opt.scenarios;
    if (names.empty() && cfg.contains("scenarios")) {
        const json& s = cfg.at("scenarios");
        if (!s.is_array()) throw InputError("'scenarios' must be an array of names");
        for (const json& n : s) {
            if (!n.is_string()) throw InputError("scenario names must be strings");
            names.push_back(n.get<std::string>());
        }
    }
    if (names.empty()) names = scenario_names();
    std::vector<Scenario> scenarios;
    for (const std::string& n : names) scenarios.push_back(make_scenario(n));
    const unsigned workers = workers_from(opt, cfg);

    json list = json::array();
    bool all = true;
    for (Scenario& s : scenarios) {
        if (cfg.contains("samples")) {
            const json& v = cfg.at("samples");
            if (!v.is_number_integer() || v.get<std::int64_t>() < 1) throw InputError("'samples' must be a positive integer");
            s.settings.samples = v.get<std::uint64_t>();
        }
        if (cfg.contains("seed")) {
            const json& v = cfg.at("seed");
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw InputError("'seed' must be a non-negative integer");
            s.settings.seed = v.get<std::uint64_t>();
        }
        s.settings.lab.workers = workers;
        const ValidationReport r = run_scenario(s);
        json comps = json::array();
        for (const Comparison& c : r.comparisons) {
            comps.push_back({{"name", c.name},
                             {"analytic", c.analytic},
                             {"analytic_error", c.analytic_error},
                             {"empirical", c.empirical},
                             {"empirical_error", c.empirical_error},
                             {"z_score", c.z_score},
                             {"pass", c.pass}});
        }
        all = all && r.passed();
        list.push_back({{"name", s.name},
                        {"description", s.description},
                        {"passed", r.passed()},
                        {"samples", s.settings.samples},
                        {"seed", s.settings.seed},
                        {"flagged", r.diagnostics.flagged},
                        {"comparisons", std::move(comps)}});
    }
    const json report{{"command", "validate"}, {"passed", all}, {"scenarios", std::move(list)}};
    emit(report.dump(2) + '\n', output_path(opt, cfg), out);
    return all ? exit_success : exit_validation_failed;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlation functions of the zeros of random polynomials", "zerocorr"};
    app.require_subcommand(1);
    Options opt;

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const json&, const Options&, std::ostream&);
        CLI::App* app = nullptr;
    };
    std::vector<Command> commands = {
        {"density-real", "CSV of the density of real zeros on a grid", cmd_density_real},
        {"density-complex", "CSV of the density of complex zeros on a grid in the upper half-plane", cmd_density_complex},
        {"correlation", "JSON report of mixed correlation functions at given configurations", cmd_correlation},
        {"real-count", "JSON report of the distribution of the number of real zeros", cmd_real_count},
        {"simulate", "Empirical densities, moments and real-count distribution by root finding", cmd_simulate},
        {"validate", "Run built-in validation scenarios; exit 1 on any failure", cmd_validate},
    };
    for (Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", opt.config_path, "JSON run configuration");
        sub->add_option("--set", opt.sets, "Override a config entry: dotted.key=value (value parsed as JSON)")
            ->expected(1)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        sub->add_option("--workers", opt.workers, "Worker threads (default: hardware parallelism)");
        sub->add_option("--out", opt.out, "Output file (default: stdout)");
        if (std::string_view(c.name) == "validate") {
            sub->add_flag("--list", opt.list, "List scenario names and exit");
            sub->add_option("--scenario", opt.scenarios, "Scenario to run (repeatable)")
                ->expected(1)
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        }
        c.app = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_success : exit_usage;
    }

    try {
        for (const Command& c : commands) {
            if (c.app->parsed()) {
                const json cfg = load_config(opt);
                return c.run(cfg, opt, out);
            }
        }
        return exit_usage;
    } catch (const BackendUnavailableError& e) {
        err << "error: " << e.what() << '\n';
        return exit_backend;
    } catch (const DiagnosticsError& e) {
        err << "error: " << e.what() << '\n';
        return exit_backend;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << '\n';
        return exit_backend;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << '\n';
        return exit_backend;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const json::exception& e) {
        err << "error: invalid config: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_backend;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"zerocorr"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace zerocorr
