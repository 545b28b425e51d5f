#pragma once

#include <stdexcept>

namespace jumprep {

/// A structural or mass-balance invariant failed on an input object.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A scenario, payoff or CLI configuration could not be interpreted.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical diagnostic tripped (divergent estimator, conditioning loss,
/// evaluation in a region the model declares impossible).
struct DiagnosticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace jumprep
