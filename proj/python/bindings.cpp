#include "zerocorr/cli.hpp"
#include "zerocorr/closed_forms.hpp"
#include "zerocorr/engine.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/lab.hpp"
#include "zerocorr/scenarios.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace zerocorr;

namespace {

BackendSettings make_settings(const std::string& backend, double tolerance, std::uint64_t samples,
                              std::uint64_t seed, unsigned workers, int adaptive_cutoff) {
    BackendSettings s;
    s.backend = backend_from_string(backend);
    s.tolerance = tolerance;
    s.samples = samples;
    s.seed = seed;
    s.workers = workers;
    s.adaptive_cutoff = adaptive_cutoff;
    return s;
}

py::dict estimate_dict(const IntegralEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["error"] = e.error;
    d["backend"] = std::string(to_string(e.backend));
    d["effort"] = e.effort;
    return d;
}

template <class F>
IntegralEstimate without_gil(F&& f) {
    py::gil_scoped_release release;
    return f();
}

std::vector<Interval> intervals(const std::vector<std::pair<double, double>>& v) {
    std::vector<Interval> out;
    for (const auto& [lo, hi] : v) out.push_back({lo, hi});
    return out;
}

std::vector<Rectangle> rectangles(const std::vector<std::array<double, 4>>& v) {
    std::vector<Rectangle> out;
    for (const auto& r : v) out.push_back({r[0], r[1], r[2], r[3]});
    return out;
}

} // namespace

PYBIND11_MODULE(_zerocorr, m) {
    m.doc() = "Correlation functions of zeros of random polynomials with independent coefficients.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
    py::register_exception<ModelMismatchError>(m, "ModelMismatchError", base.ptr());
    py::register_exception<BackendUnavailableError>(m, "BackendUnavailableError", base.ptr());
    py::register_exception<DiagnosticsError>(m, "DiagnosticsError", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());

    py::class_<CoefficientDensity>(m, "Density")
        .def_static("uniform", &CoefficientDensity::uniform, py::arg("a") = -1.0, py::arg("b") = 1.0)
        .def_static("gaussian", &CoefficientDensity::gaussian, py::arg("v") = 1.0)
        .def_static("exponential", &CoefficientDensity::exponential, py::arg("scale") = 1.0)
        .def_static("tabulated", &CoefficientDensity::tabulated, py::arg("grid"), py::arg("values"))
        .def_property_readonly("kind", [](const CoefficientDensity& d) { return std::string(to_string(d.kind())); })
        .def("__call__", [](const CoefficientDensity& d, double u) { return eval_density(d, u); })
        .def("__call__", [](const CoefficientDensity& d, py::array_t<double> u) {
            return py::vectorize([&d](double x) { return eval_density(d, x); })(u);
        })
        .def("support", [](const CoefficientDensity& d) {
            const Support s = d.support();
            return std::make_pair(s.lo, s.hi);
        })
        .def("decay_radius", [](const CoefficientDensity& d, double eps) { return decay_radius(d, eps); },
             py::arg("eps"))
        .def("__eq__", [](const CoefficientDensity& a, const CoefficientDensity& b) { return a == b; })
        .def("__repr__", [](const CoefficientDensity& d) { return "<Density " + std::string(to_string(d.kind())) + ">"; });

    py::class_<CoefficientModel>(m, "Model")
        .def(py::init<int, std::vector<CoefficientDensity>>(), py::arg("degree"), py::arg("densities"))
        .def_static("iid", &CoefficientModel::iid, py::arg("degree"), py::arg("density"))
        .def_property_readonly("degree", &CoefficientModel::degree)
        .def("density", [](const CoefficientModel& mod, int i) {
            if (i < 0 || i > mod.degree()) throw py::index_error("coefficient index out of range");
            return mod.density(i);
        })
        .def("__repr__", [](const CoefficientModel& mod) {
            return "<Model degree=" + std::to_string(mod.degree()) + ">";
        });

    py::class_<ZeroConfiguration>(m, "Configuration")
        .def(py::init([](std::vector<double> real, std::vector<cplx> complex) {
                 return ZeroConfiguration(std::move(real), std::move(complex));
             }),
             py::arg("real") = std::vector<double>{}, py::arg("complex") = std::vector<cplx>{})
        .def_property_readonly("real", [](const ZeroConfiguration& c) {
            return std::vector<double>(c.real_points().begin(), c.real_points().end());
        })
        .def_property_readonly("complex", [](const ZeroConfiguration& c) {
            return std::vector<cplx>(c.complex_points().begin(), c.complex_points().end());
        })
        .def_property_readonly("k", &ZeroConfiguration::k)
        .def_property_readonly("l", &ZeroConfiguration::l)
        .def_property_readonly("m", &ZeroConfiguration::m);

    m.def("elementary_symmetric", [](const ZeroConfiguration& c) {
        const SymmetricProfile p = elementary_symmetric(c);
        return std::make_pair(p.sigma, p.vandermonde);
    }, py::arg("config"), "sigma_0..sigma_m and the vandermonde product of the full tuple.");
    m.def("real_vandermonde", &real_vandermonde, py::arg("config"));

#define ZC_SETTINGS                                                                                         \
    py::arg("backend") = "adaptive", py::arg("tolerance") = 1e-8, py::arg("samples") = 100000,             \
        py::arg("seed") = 0, py::arg("workers") = 0, py::arg("adaptive_cutoff") = 4

    m.def("rho_kl",
          [](const CoefficientModel& mod, const ZeroConfiguration& c, const std::string& b, double tol,
             std::uint64_t n, std::uint64_t seed, unsigned w, int cut) {
              return estimate_dict(without_gil([&] { return rho_kl(mod, c, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("config"), ZC_SETTINGS);
    m.def("rho_m",
          [](const CoefficientModel& mod, const ZeroConfiguration& c, const std::string& b, double tol,
             std::uint64_t n, std::uint64_t seed, unsigned w, int cut) {
              return estimate_dict(without_gil([&] { return rho_m(mod, c, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("config"), ZC_SETTINGS);
    m.def("real_density",
          [](const CoefficientModel& mod, double x, const std::string& b, double tol, std::uint64_t n,
             std::uint64_t seed, unsigned w, int cut) {
              return estimate_dict(without_gil([&] { return rho_real_density(mod, x, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("x"), ZC_SETTINGS);
    m.def("complex_density",
          [](const CoefficientModel& mod, cplx z, const std::string& b, double tol, std::uint64_t n,
             std::uint64_t seed, unsigned w, int cut) {
              return estimate_dict(without_gil([&] { return rho_complex_density(mod, z, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("z"), ZC_SETTINGS);
    m.def("integrate_correlation",
          [](const CoefficientModel& mod, const std::vector<std::pair<double, double>>& real,
             const std::vector<std::array<double, 4>>& complex, const std::string& b, double tol, std::uint64_t n,
             std::uint64_t seed, unsigned w, int cut) {
              const auto iv = intervals(real);
              const auto rc = rectangles(complex);
              return estimate_dict(without_gil([&] { return integrate_correlation(mod, iv, rc, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("real") = std::vector<std::pair<double, double>>{},
          py::arg("complex") = std::vector<std::array<double, 4>>{}, ZC_SETTINGS);
    m.def("prob_real_count",
          [](const CoefficientModel& mod, int l, const std::string& b, double tol, std::uint64_t n,
             std::uint64_t seed, unsigned w, int cut) {
              return estimate_dict(without_gil([&] { return prob_real_count(mod, l, make_settings(b, tol, n, seed, w, cut)); }));
          },
          py::arg("model"), py::arg("pairs"), ZC_SETTINGS);
#undef ZC_SETTINGS

    m.def("joint_density", [](const CoefficientModel& mod, const ZeroConfiguration& c) {
        return joint_density(mod, c).value;
    }, py::arg("model"), py::arg("config"));
    m.def("closed_form_family", [](const CoefficientModel& mod) -> std::optional<std::string> {
        const auto f = closed_form_family(mod);
        if (!f) return std::nullopt;
        return std::string(to_string(*f));
    });

    m.def("find_roots", [](py::array_t<double, py::array::c_style | py::array::forcecast> coefficients) {
        const std::span<const double> a(coefficients.data(), static_cast<std::size_t>(coefficients.size()));
        RootResult r = find_roots(a);
        py::object out = py::module_::import("numpy").attr("asarray")(py::cast(r.roots), "complex128");
        return py::make_tuple(out, r.max_residual, r.converged);
    }, py::arg("coefficients"), "Roots of sum_i a_i z^i, coefficients ascending.");

    m.def("draw_sample", [](const CoefficientModel& mod, std::uint64_t seed, std::uint64_t index) {
        const ZeroSample s = draw_sample(mod, seed, index);
        py::dict d;
        d["coefficients"] = s.coefficients;
        d["real_roots"] = s.real_roots;
        d["complex_pairs"] = s.complex_pairs;
        d["residual"] = s.max_residual;
        d["flagged"] = s.flagged;
        return d;
    }, py::arg("model"), py::arg("seed"), py::arg("index"));

    m.def("real_count_pmf", [](const CoefficientModel& mod, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
        LabOptions opts;
        opts.workers = workers;
        RealCountPmf p;
        {
            py::gil_scoped_release release;
            p = real_count_pmf(mod, samples, seed, opts);
        }
        py::dict d;
        for (std::size_t i = 0; i < p.counts.size(); ++i) d[py::int_(p.counts[i])] = py::make_tuple(p.probability[i], p.error[i]);
        return d;
    }, py::arg("model"), py::arg("samples"), py::arg("seed"), py::arg("workers") = 0);

    m.def("scenario_names", &scenario_names);
    m.def("run_scenario", [](const std::string& name, std::optional<std::uint64_t> samples) {
        Scenario sc = make_scenario(name);
        if (samples) sc.settings.samples = *samples;
        ValidationReport r;
        {
            py::gil_scoped_release release;
            r = run_scenario(sc);
        }
        py::list rows;
        for (const Comparison& c : r.comparisons) {
            py::dict d;
            d["name"] = c.name;
            d["analytic"] = c.analytic;
            d["empirical"] = c.empirical;
            d["z"] = c.z_score;
            d["pass"] = c.pass;
            rows.append(d);
        }
        return py::make_tuple(r.passed(), rows);
    }, py::arg("name"), py::arg("samples") = py::none());

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
