#pragma once

#include "jumprep/counterexample.hpp"
#include "jumprep/diffusion.hpp"
#include "jumprep/discrete.hpp"
#include "jumprep/multi_jump.hpp"
#include "jumprep/single_jump.hpp"
#include "jumprep/truncation.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace jumprep {

struct SingleJumpScenario {
    std::shared_ptr<const JumpLaw> law;
    double observe_horizon = 1.0; // simulation horizon, <= law horizon
    std::size_t grid_steps = 2048;
};

struct MultiJumpScenario {
    std::shared_ptr<const MultiJumpModel> model;
};

struct TruncationScenario {
    TruncationFamily family;
    std::vector<std::size_t> levels;
    std::size_t reference_level = 0;
    std::size_t num_paths = 100000;
};

struct CoxScenario {
    CoxParams params;
};

struct JointScenario {
    DiffusionSpec diffusion;
    std::shared_ptr<const MultiJumpModel> jumps;
    double y0 = 0.0;
};

struct DiscreteScenario {
    std::shared_ptr<const DiscreteModel> model;
};

/// A parsed scenario file. The JSON schema is versioned and strict: unknown
/// fields are rejected so archived scenarios stay unambiguous.
struct Scenario {
    int schema_version = 1;
    std::string kind;
    std::uint64_t seed = 1;
    std::variant<SingleJumpScenario, MultiJumpScenario, TruncationScenario, CoxScenario,
                 JointScenario, DiscreteScenario>
        spec;

    const SingleJumpScenario& single_jump() const;
    const MultiJumpScenario& multi_jump() const;
    const TruncationScenario& truncation() const;
    const CoxScenario& cox() const;
    const JointScenario& joint() const;
    const DiscreteScenario& discrete() const;
};

Scenario parse_scenario_json(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Parsed payoff file; interpretation depends on the scenario kind.
struct ProductTermSpec {
    double coef = 1.0;
    std::string continuous_kind; // digital | identity | square_centered | constant
    double continuous_param = 0.0;
    bool continuous_param_auto = false; // square_centered: use Gamma(horizon)
    std::string jump_kind;              // count | mark_sum | count_eq | constant
    double jump_param = 0.0;
};

struct PayoffFile {
    int schema_version = 1;
    std::string kind;
    double threshold = 0.0;
    double value = 0.0;
    double clip = 0.0;
    double scale = 1.0;
    double at_infinity = 0.0;
    std::vector<ProductTermSpec> terms;
};

PayoffFile parse_payoff_json(const std::string& text);
PayoffFile load_payoff(const std::string& path);

/// Single-jump payoff h(t, z) (+ value at infinity) from a payoff file.
PayoffFunctional make_single_jump_payoff(const PayoffFile& file, const MarkSpace& marks);
/// Mark-statistic payoff for multi-jump models.
MarkStatPayoff make_mark_stat_payoff(const PayoffFile& file, const MultiJumpModel& model);
/// Weak-representation terms for a joint scenario ("product" payoff files).
WeakRepresentation make_weak_representation(const PayoffFile& file,
                                            const JointScenario& scenario);

/// Bundled example scenarios, addressable from the CLI.
std::vector<std::string> bundled_scenario_names();
std::string bundled_scenario(const std::string& name);
std::string bundled_payoff(const std::string& name);

} // namespace jumprep
