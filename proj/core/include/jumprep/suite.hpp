#pragma once

#include "jumprep/report.hpp"
#include "jumprep/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jumprep {

struct SuiteOptions {
    std::vector<std::string> selection; // empty = every check for the kind
    std::size_t num_paths = 20000;
    double se_band = 3.0;       // acceptance band for Monte Carlo comparisons
    double exact_tol = 1e-10;   // exact-arithmetic identities
    int threads = 0;
    std::uint64_t seed_override = 0; // 0 = scenario seed
};

/// Runs the invariant checks that apply to the scenario kind and returns one
/// row per check: {check, value, tolerance, status}. Checks that do not bind
/// (degenerate inputs) report status "skip".
Report run_property_suite(const Scenario& scenario, const SuiteOptions& options = {});

/// Check names available for a scenario kind (for CLI help and selection).
std::vector<std::string> suite_check_names(const std::string& kind);

} // namespace jumprep
