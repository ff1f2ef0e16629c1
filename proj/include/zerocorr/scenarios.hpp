#pragma once

#include "zerocorr/lab.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace zerocorr {

/// A named validation suite: analytic quantities of one model compared
/// against simulation.
struct Scenario {
    std::string name;
    std::string description;
    CoefficientModel model;
    std::vector<ComparisonSpec> comparisons;
    ValidationSettings settings;
};

std::vector<std::string> scenario_names();

/// Throws InputError for an unknown name.
Scenario make_scenario(std::string_view name);

ValidationReport run_scenario(const Scenario& scenario);

} // namespace zerocorr
