#pragma once

#include "zerocorr/density.hpp"
#include "zerocorr/engine.hpp"

#include "json.hpp"

namespace zerocorr {

// Every parser throws InputError on a schema violation.

/// {"kind": "uniform", "lower": -1, "upper": 1}
/// {"kind": "gaussian", "sd": 1}
/// {"kind": "exponential", "scale": 1}
/// {"kind": "tabulated", "grid": [...], "values": [...]}
CoefficientDensity density_from_json(const nlohmann::json& j);
nlohmann::json density_to_json(const CoefficientDensity& d);

/// {"degree": n, "iid": <density>} or {"degree": n, "densities": [<density> x (n+1)]}.
CoefficientModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const CoefficientModel& m);

/// {"kind", "tolerance", "samples", "seed", "adaptive_cutoff", "truncation_eps", "qmc_replicates"};
/// all keys optional.
BackendSettings backend_from_json(const nlohmann::json& j);

} // namespace zerocorr
