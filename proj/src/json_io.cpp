#include "zerocorr/json_io.hpp"

#include "zerocorr/error.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace zerocorr {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string(where) + ": missing key '" + key + "'");
    }
    return j.at(key);
}

double number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw InputError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

// First of `keys` present, else fallback.
double number_of(const json& j, std::initializer_list<const char*> keys, double fallback) {
    for (const char* key : keys) {
        if (j.contains(key)) return number(j, key, fallback);
    }
    return fallback;
}

std::uint64_t count(const json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw InputError(std::string("'") + key + "' must be a non-negative integer");
}

std::vector<double> numbers(const json& j, const char* key) {
    const json& v = require(j, key, "tabulated density");
    if (!v.is_array()) throw InputError(std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) throw InputError(std::string("'") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

CoefficientDensity density_from_json(const json& j) {
    if (!j.is_object()) throw InputError("density must be an object");
    const json& kind = require(j, "kind", "density");
    if (!kind.is_string()) throw InputError("density kind must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "uniform") {
        return CoefficientDensity::uniform(number_of(j, {"a", "lower"}, -1.0), number_of(j, {"b", "upper"}, 1.0));
    }
    if (k == "gaussian") return CoefficientDensity::gaussian(number_of(j, {"v", "sd"}, 1.0));
    if (k == "exponential") return CoefficientDensity::exponential(number(j, "scale", 1.0));
    if (k == "tabulated") return CoefficientDensity::tabulated(numbers(j, "grid"), numbers(j, "values"));
    throw InputError("unknown density kind '" + k + "'");
}

json density_to_json(const CoefficientDensity& d) {
    switch (d.kind()) {
    case DensityKind::uniform: return {{"kind", "uniform"}, {"a", d.lower()}, {"b", d.upper()}};
    case DensityKind::gaussian: return {{"kind", "gaussian"}, {"v", d.sd()}};
    case DensityKind::exponential: return {{"kind", "exponential"}, {"scale", d.scale()}};
    case DensityKind::tabulated: {
        json j{{"kind", "tabulated"}};
        j["grid"] = std::vector<double>(d.grid().begin(), d.grid().end());
        j["values"] = std::vector<double>(d.values().begin(), d.values().end());
        return j;
    }
    }
    return {};
}

CoefficientModel model_from_json(const json& j) {
    if (!j.is_object()) throw InputError("model must be an object");
    const json& deg = require(j, "degree", "model");
    if (!deg.is_number_integer()) throw InputError("model degree must be an integer");
    const auto n = deg.get<std::int64_t>();
    if (n < 1) throw InputError("model degree must be at least 1");
    if (n > 64) throw InputError("model degree must be at most 64");
    const bool has_iid = j.contains("iid");
    const bool has_list = j.contains("densities");
    if (has_iid == has_list) throw InputError("model needs exactly one of 'iid' and 'densities'");
    if (has_iid) return CoefficientModel::iid(static_cast<int>(n), density_from_json(j.at("iid")));
    const json& list = j.at("densities");
    if (!list.is_array()) throw InputError("'densities' must be an array");
    std::vector<CoefficientDensity> ds;
    for (const json& e : list) ds.push_back(density_from_json(e));
    return CoefficientModel(static_cast<int>(n), std::move(ds));
}

json model_to_json(const CoefficientModel& m) {
    json list = json::array();
    for (const CoefficientDensity& d : m.densities()) list.push_back(density_to_json(d));
    return {{"degree", m.degree()}, {"densities", std::move(list)}};
}

BackendSettings backend_from_json(const json& j) {
    BackendSettings s;
    if (j.is_null()) return s;
    if (!j.is_object()) throw InputError("backend must be an object");
    if (j.contains("kind")) {
        if (!j.at("kind").is_string()) throw InputError("backend kind must be a string");
        s.backend = backend_from_string(j.at("kind").get<std::string>());
    }
    s.tolerance = number(j, "tolerance", s.tolerance);
    if (!(s.tolerance > 0.0 && s.tolerance < 1.0)) throw InputError("tolerance must lie in (0, 1)");
    s.samples = count(j, "samples", s.samples);
    s.seed = count(j, "seed", s.seed);
    s.adaptive_cutoff = static_cast<int>(count(j, "adaptive_cutoff", static_cast<std::uint64_t>(s.adaptive_cutoff)));
    s.truncation_eps = number(j, "truncation_eps", s.truncation_eps);
    if (!(s.truncation_eps > 0.0 && s.truncation_eps < 1.0)) throw InputError("truncation_eps must lie in (0, 1)");
    s.qmc_replicates = static_cast<int>(count(j, "qmc_replicates", static_cast<std::uint64_t>(s.qmc_replicates)));
    return s;
}

} // namespace zerocorr
