#include "jumprep/scenario.hpp"

#include "jumprep/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace jumprep {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) throw ScenarioError(context + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ScenarioError("unknown field '" + it.key() + "' in " + context);
}

double require_number(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.contains(key)) throw ScenarioError(context + " needs field '" + key + "'");
    if (!obj[key].is_number()) throw ScenarioError(context + "." + key + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    return obj.contains(key) ? obj[key].get<double>() : fallback;
}

MarkSpace parse_marks(const json& arr, const std::string& context) {
    if (!arr.is_array() || arr.empty())
        throw ScenarioError(context + ".mark_space must be a nonempty array");
    std::vector<Mark> marks;
    for (const auto& m : arr) {
        check_keys(m, {"label", "value"}, context + ".mark_space[]");
        if (!m.contains("label") || !m["label"].is_string())
            throw ScenarioError("mark needs a string label");
        marks.push_back({m["label"].get<std::string>(), require_number(m, "value", "mark")});
    }
    return MarkSpace(std::move(marks));
}

std::function<double(double)> parse_density_family(const json& d, const std::string& ctx) {
    const std::string family = d.at("family").get<std::string>();
    const double weight = number_or(d, "weight", 1.0);
    if (weight < 0.0) throw ScenarioError(ctx + ": negative density weight");
    if (family == "exponential") {
        check_keys(d, {"mark", "family", "rate", "weight"}, ctx);
        const double rate = require_number(d, "rate", ctx);
        if (!(rate > 0.0)) throw ScenarioError(ctx + ": exponential rate must be positive");
        return [rate, weight](double t) { return weight * rate * std::exp(-rate * t); };
    }
    if (family == "uniform") {
        check_keys(d, {"mark", "family", "from", "to", "weight"}, ctx);
        const double a = require_number(d, "from", ctx);
        const double b = require_number(d, "to", ctx);
        if (!(b > a) || a < 0.0) throw ScenarioError(ctx + ": bad uniform support");
        const double density = weight / (b - a);
        return [a, b, density](double t) { return (t >= a && t <= b) ? density : 0.0; };
    }
    if (family == "constant") {
        check_keys(d, {"mark", "family", "level", "weight"}, ctx);
        const double level = require_number(d, "level", ctx);
        if (level < 0.0) throw ScenarioError(ctx + ": negative constant density");
        return [level, weight](double) { return weight * level; };
    }
    throw ScenarioError(ctx + ": unknown density family '" + family + "'");
}

SingleJumpScenario parse_single_jump(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "horizon", "grid_steps",
                     "observe_horizon", "mark_space", "law"},
               "single_jump scenario");
    const MarkSpace marks = parse_marks(doc.at("mark_space"), "single_jump");
    const double horizon = require_number(doc, "horizon", "single_jump");
    const auto steps = static_cast<std::size_t>(number_or(doc, "grid_steps", 2048));

    const json& law = doc.at("law");
    check_keys(law, {"density", "atoms", "mass_at_infinity"}, "law");

    std::vector<DensityComponent> density;
    if (law.contains("density")) {
        for (const auto& d : law["density"]) {
            const std::size_t mark = marks.index_of(d.at("mark").get<std::string>());
            density.push_back({mark, parse_density_family(d, "law.density[]")});
        }
    }
    std::vector<LawAtom> atoms;
    if (law.contains("atoms")) {
        for (const auto& a : law["atoms"]) {
            check_keys(a, {"time", "mark", "mass"}, "law.atoms[]");
            atoms.push_back({require_number(a, "time", "atom"),
                             marks.index_of(a.at("mark").get<std::string>()),
                             require_number(a, "mass", "atom")});
        }
    }

    double mass_infinity = 0.0;
    bool auto_mass = true;
    if (law.contains("mass_at_infinity") && !law["mass_at_infinity"].is_string()) {
        mass_infinity = law["mass_at_infinity"].get<double>();
        auto_mass = false;
    }
    if (auto_mass) {
        // probe: total of density + atoms via a draft law with slack, then fill up
        double atom_total = 0.0;
        for (const auto& a : atoms) atom_total += a.mass;
        TimeGrid grid{horizon, steps};
        double density_total = 0.0;
        for (std::size_t z = 0; z < marks.size(); ++z) {
            auto f = [&](double t) {
                double v = 0.0;
                for (const auto& c : density)
                    if (c.mark == z) v += c.intensity(t);
                return v;
            };
            density_total += cumulative_integral(f, grid).back();
        }
        mass_infinity = 1.0 - atom_total - density_total;
        if (mass_infinity < -1e-9)
            throw ScenarioError("law mass exceeds 1; cannot auto-fill mass_at_infinity");
        mass_infinity = std::max(0.0, mass_infinity);
    }

    SingleJumpScenario out;
    out.law = std::make_shared<const JumpLaw>(marks, TimeGrid{horizon, steps},
                                              std::move(density), std::move(atoms),
                                              mass_infinity);
    out.observe_horizon = number_or(doc, "observe_horizon", horizon);
    if (out.observe_horizon <= 0.0 || out.observe_horizon > horizon)
        throw ScenarioError("observe_horizon must lie in ]0, horizon]");
    out.grid_steps = steps;
    return out;
}

MultiJumpScenario parse_multi_jump(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "horizon", "grid_steps",
                     "mark_space", "rates", "max_jumps"},
               "multi_jump scenario");
    const MarkSpace marks = parse_marks(doc.at("mark_space"), "multi_jump");
    const double horizon = require_number(doc, "horizon", "multi_jump");
    const auto steps = static_cast<std::size_t>(number_or(doc, "grid_steps", 512));
    const auto cap = static_cast<std::size_t>(number_or(doc, "max_jumps", 256));
    std::vector<double> rates;
    for (const auto& r : doc.at("rates")) rates.push_back(r.get<double>());
    MultiJumpScenario out;
    out.model = std::make_shared<const MultiJumpModel>(
        MultiJumpModel::compound_poisson(marks, std::move(rates), horizon, cap, steps));
    return out;
}

TruncationScenario parse_truncation(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "horizon", "grid_steps",
                     "first_value", "value_ratio", "first_intensity", "intensity_ratio",
                     "max_level", "levels", "reference_level", "num_paths"},
               "truncation scenario");
    TruncationScenario out;
    const double horizon = require_number(doc, "horizon", "truncation");
    out.family = TruncationFamily::geometric(
        require_number(doc, "first_value", "truncation"),
        require_number(doc, "value_ratio", "truncation"),
        require_number(doc, "first_intensity", "truncation"),
        require_number(doc, "intensity_ratio", "truncation"),
        static_cast<std::size_t>(require_number(doc, "max_level", "truncation")), horizon,
        static_cast<std::size_t>(number_or(doc, "grid_steps", 512)));
    if (doc.contains("levels"))
        for (const auto& l : doc["levels"])
            out.levels.push_back(l.get<std::size_t>());
    else
        out.levels = {2, 4, 6};
    out.reference_level = static_cast<std::size_t>(
        number_or(doc, "reference_level", double(out.family.max_level())));
    out.num_paths = static_cast<std::size_t>(number_or(doc, "num_paths", 100000));
    return out;
}

CoxScenario parse_cox(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "t", "eps", "n_levels", "windows",
                     "num_paths", "steps_per_min_window"},
               "cox scenario");
    CoxScenario out;
    out.params.t = require_number(doc, "t", "cox");
    out.params.eps = require_number(doc, "eps", "cox");
    out.params.n_levels.clear();
    for (const auto& n : doc.at("n_levels")) out.params.n_levels.push_back(n.get<double>());
    out.params.windows.clear();
    for (const auto& h : doc.at("windows")) out.params.windows.push_back(h.get<double>());
    out.params.num_paths = static_cast<std::size_t>(number_or(doc, "num_paths", 10000));
    out.params.steps_per_min_window =
        static_cast<std::size_t>(number_or(doc, "steps_per_min_window", 16));
    return out;
}

JointScenario parse_joint(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "horizon", "grid_steps", "y0",
                     "variance", "jump"},
               "joint scenario");
    const double horizon = require_number(doc, "horizon", "joint");
    const auto steps = static_cast<std::size_t>(number_or(doc, "grid_steps", 512));

    const json& variance = doc.at("variance");
    check_keys(variance, {"family", "slope"}, "joint.variance");
    const std::string family = variance.at("family").get<std::string>();
    DiffusionSpec spec;
    if (family == "linear") {
        spec = DiffusionSpec::linear(require_number(variance, "slope", "variance"),
                                     horizon, steps);
    } else {
        throw ScenarioError("unknown variance family: " + family);
    }

    const json& jump = doc.at("jump");
    check_keys(jump, {"mark_space", "rates", "max_jumps"}, "joint.jump");
    const MarkSpace marks = parse_marks(jump.at("mark_space"), "joint.jump");
    std::vector<double> rates;
    for (const auto& r : jump.at("rates")) rates.push_back(r.get<double>());
    const auto cap = static_cast<std::size_t>(number_or(jump, "max_jumps", 256));

    JointScenario out;
    out.diffusion = std::move(spec);
    out.jumps = std::make_shared<const MultiJumpModel>(
        MultiJumpModel::compound_poisson(marks, std::move(rates), horizon, cap, steps));
    out.y0 = number_or(doc, "y0", 0.0);
    return out;
}

DiscreteScenario parse_discrete(const json& doc) {
    check_keys(doc, {"schema_version", "kind", "seed", "horizon", "mark_space",
                     "slot_probabilities"},
               "discrete scenario");
    const MarkSpace marks = parse_marks(doc.at("mark_space"), "discrete");
    const double horizon = require_number(doc, "horizon", "discrete");
    std::vector<std::vector<double>> table;
    for (const auto& row : doc.at("slot_probabilities")) {
        std::vector<double> r;
        for (const auto& p : row) r.push_back(p.get<double>());
        table.push_back(std::move(r));
    }
    DiscreteScenario out;
    out.model = std::make_shared<const DiscreteModel>(
        DiscreteModel::from_table(marks, horizon, std::move(table)));
    return out;
}

} // namespace

const SingleJumpScenario& Scenario::single_jump() const {
    if (const auto* s = std::get_if<SingleJumpScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not single_jump");
}
const MultiJumpScenario& Scenario::multi_jump() const {
    if (const auto* s = std::get_if<MultiJumpScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not multi_jump");
}
const TruncationScenario& Scenario::truncation() const {
    if (const auto* s = std::get_if<TruncationScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not truncation_family");
}
const CoxScenario& Scenario::cox() const {
    if (const auto* s = std::get_if<CoxScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not cox");
}
const JointScenario& Scenario::joint() const {
    if (const auto* s = std::get_if<JointScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not joint_diffusion");
}
const DiscreteScenario& Scenario::discrete() const {
    if (const auto* s = std::get_if<DiscreteScenario>(&spec)) return *s;
    throw ScenarioError("scenario kind '" + kind + "' is not discrete");
}

Scenario parse_scenario_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("bad scenario JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1)
        throw ScenarioError("scenario needs schema_version = 1");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ScenarioError("scenario needs a string kind");

    Scenario out;
    out.schema_version = 1;
    out.kind = doc["kind"].get<std::string>();
    out.seed = static_cast<std::uint64_t>(number_or(doc, "seed", 1.0));
    if (out.kind == "single_jump")
        out.spec = parse_single_jump(doc);
    else if (out.kind == "multi_jump")
        out.spec = parse_multi_jump(doc);
    else if (out.kind == "truncation_family")
        out.spec = parse_truncation(doc);
    else if (out.kind == "cox")
        out.spec = parse_cox(doc);
    else if (out.kind == "joint_diffusion")
        out.spec = parse_joint(doc);
    else if (out.kind == "discrete")
        out.spec = parse_discrete(doc);
    else
        throw ScenarioError("unknown scenario kind: " + out.kind);
    return out;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

PayoffFile parse_payoff_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("bad payoff JSON: ") + e.what());
    }
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1)
        throw ScenarioError("payoff needs schema_version = 1");
    PayoffFile out;
    out.kind = doc.at("kind").get<std::string>();

    if (out.kind == "time_indicator") {
        check_keys(doc, {"schema_version", "kind", "threshold", "at_infinity"}, "payoff");
        out.threshold = require_number(doc, "threshold", "payoff");
        out.at_infinity = number_or(doc, "at_infinity", 0.0);
    } else if (out.kind == "constant") {
        check_keys(doc, {"schema_version", "kind", "value"}, "payoff");
        out.value = require_number(doc, "value", "payoff");
        out.at_infinity = out.value;
    } else if (out.kind == "mark_value") {
        check_keys(doc, {"schema_version", "kind", "scale", "at_infinity"}, "payoff");
        out.scale = number_or(doc, "scale", 1.0);
        out.at_infinity = number_or(doc, "at_infinity", 0.0);
    } else if (out.kind == "count" || out.kind == "mark_sum" ||
               out.kind == "indicator_positive") {
        check_keys(doc, {"schema_version", "kind"}, "payoff");
    } else if (out.kind == "clipped_mark_sum") {
        check_keys(doc, {"schema_version", "kind", "clip"}, "payoff");
        out.clip = require_number(doc, "clip", "payoff");
    } else if (out.kind == "count_eq") {
        check_keys(doc, {"schema_version", "kind", "value"}, "payoff");
        out.value = require_number(doc, "value", "payoff");
    } else if (out.kind == "product") {
        check_keys(doc, {"schema_version", "kind", "terms"}, "payoff");
        for (const auto& term : doc.at("terms")) {
            check_keys(term, {"coef", "continuous", "jump"}, "payoff.terms[]");
            ProductTermSpec spec;
            spec.coef = number_or(term, "coef", 1.0);
            const json& cont = term.at("continuous");
            spec.continuous_kind = cont.at("kind").get<std::string>();
            if (spec.continuous_kind == "digital") {
                check_keys(cont, {"kind", "strike"}, "continuous payoff");
                spec.continuous_param = require_number(cont, "strike", "continuous");
            } else if (spec.continuous_kind == "identity") {
                check_keys(cont, {"kind"}, "continuous payoff");
            } else if (spec.continuous_kind == "square_centered") {
                check_keys(cont, {"kind", "center"}, "continuous payoff");
                if (cont.contains("center"))
                    spec.continuous_param = cont["center"].get<double>();
                else
                    spec.continuous_param_auto = true;
            } else if (spec.continuous_kind == "constant") {
                check_keys(cont, {"kind", "value"}, "continuous payoff");
                spec.continuous_param = require_number(cont, "value", "continuous");
            } else {
                throw ScenarioError("unknown continuous payoff kind: " +
                                    spec.continuous_kind);
            }
            const json& jump = term.at("jump");
            spec.jump_kind = jump.at("kind").get<std::string>();
            if (spec.jump_kind == "count" || spec.jump_kind == "mark_sum") {
                check_keys(jump, {"kind"}, "jump payoff");
            } else if (spec.jump_kind == "count_eq") {
                check_keys(jump, {"kind", "value"}, "jump payoff");
                spec.jump_param = require_number(jump, "value", "jump");
            } else if (spec.jump_kind == "centered_count") {
                check_keys(jump, {"kind"}, "jump payoff");
            } else if (spec.jump_kind == "constant") {
                check_keys(jump, {"kind", "value"}, "jump payoff");
                spec.jump_param = require_number(jump, "value", "jump");
            } else {
                throw ScenarioError("unknown jump payoff kind: " + spec.jump_kind);
            }
            out.terms.push_back(std::move(spec));
        }
        if (out.terms.empty()) throw ScenarioError("product payoff needs terms");
    } else {
        throw ScenarioError("unknown payoff kind: " + out.kind);
    }
    return out;
}

PayoffFile load_payoff(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open payoff file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_payoff_json(buf.str());
}

PayoffFunctional make_single_jump_payoff(const PayoffFile& file, const MarkSpace& marks) {
    if (file.kind == "time_indicator") {
        const double tau = file.threshold;
        return PayoffFunctional(
            [tau](double t, std::size_t) { return t <= tau ? 1.0 : 0.0; },
            file.at_infinity);
    }
    if (file.kind == "constant") {
        const double v = file.value;
        return PayoffFunctional([v](double, std::size_t) { return v; }, v);
    }
    if (file.kind == "mark_value") {
        std::vector<double> values;
        for (const auto& m : marks.marks()) values.push_back(m.value);
        const double scale = file.scale;
        return PayoffFunctional(
            [values, scale](double, std::size_t z) { return scale * values[z]; },
            file.at_infinity);
    }
    throw ScenarioError("payoff kind '" + file.kind + "' does not apply to a single jump");
}

MarkStatPayoff make_mark_stat_payoff(const PayoffFile& file, const MultiJumpModel& model) {
    std::vector<double> values;
    double step = std::numeric_limits<double>::infinity();
    for (const auto& m : model.marks().marks()) {
        values.push_back(m.value);
        if (m.value != 0.0) step = std::min(step, std::fabs(m.value));
    }
    if (!std::isfinite(step)) step = 1.0;

    if (file.kind == "count")
        return {"count", std::vector<double>(model.marks().size(), 1.0),
                [](double x) { return x; }, 1.0};
    if (file.kind == "mark_sum")
        return {"mark_sum", values, [](double x) { return x; }, step};
    if (file.kind == "clipped_mark_sum") {
        const double clip = file.clip;
        return {"clipped_mark_sum", values,
                [clip](double x) { return std::clamp(x, -clip, clip); }, step};
    }
    if (file.kind == "indicator_positive")
        return {"indicator_positive", values,
                [](double x) { return x > 1e-12 ? 1.0 : 0.0; }, step};
    if (file.kind == "count_eq") {
        const double v = file.value;
        return {"count_eq", std::vector<double>(model.marks().size(), 1.0),
                [v](double x) { return x == v ? 1.0 : 0.0; }, 1.0};
    }
    throw ScenarioError("payoff kind '" + file.kind + "' is not a mark-statistic payoff");
}

WeakRepresentation make_weak_representation(const PayoffFile& file,
                                            const JointScenario& scenario) {
    if (file.kind != "product")
        throw ScenarioError("joint scenarios need a 'product' payoff file");
    const double gamma_h = scenario.diffusion.gamma(scenario.diffusion.horizon);
    const double horizon = scenario.diffusion.horizon;
    double total_rate = 0.0;
    for (double r : scenario.jumps->rates()) total_rate += r;

    std::vector<ProductTerm> terms;
    for (const auto& spec : file.terms) {
        ContinuousPayoff cont = ContinuousPayoff::constant(1.0);
        if (spec.continuous_kind == "digital")
            cont = ContinuousPayoff::digital(spec.continuous_param);
        else if (spec.continuous_kind == "identity")
            cont = ContinuousPayoff::identity();
        else if (spec.continuous_kind == "square_centered")
            cont = ContinuousPayoff::square_centered(
                spec.continuous_param_auto ? gamma_h : spec.continuous_param);
        else if (spec.continuous_kind == "constant")
            cont = ContinuousPayoff::constant(spec.continuous_param);

        PayoffFile jump_file;
        jump_file.kind = spec.jump_kind;
        jump_file.value = spec.jump_param;
        MarkStatPayoff stat = [&]() -> MarkStatPayoff {
            if (spec.jump_kind == "centered_count") {
                const double drift = total_rate * horizon;
                return {"centered_count",
                        std::vector<double>(scenario.jumps->marks().size(), 1.0),
                        [drift](double x) { return x - drift; }, 1.0};
            }
            if (spec.jump_kind == "constant") {
                const double v = spec.jump_param;
                return {"constant",
                        std::vector<double>(scenario.jumps->marks().size(), 1.0),
                        [v](double) { return v; }, 1.0};
            }
            return make_mark_stat_payoff(jump_file, *scenario.jumps);
        }();

        ProductTerm term;
        term.coef = spec.coef;
        term.cont = continuous_factor(cont, scenario.diffusion, scenario.y0);
        term.jump = jump_factor(stat, *scenario.jumps);
        terms.push_back(std::move(term));
    }
    return weak_representation(std::move(terms));
}

std::vector<std::string> bundled_scenario_names() {
    return {"exponential", "compound_poisson", "geometric_truncation", "cox", "joint",
            "discrete"};
}

std::string bundled_scenario(const std::string& name) {
    if (name == "exponential")
        return R"({"schema_version":1,"kind":"single_jump","seed":7,"horizon":2.0,
  "grid_steps":2048,"observe_horizon":0.7,
  "mark_space":[{"label":"a","value":1.0}],
  "law":{"density":[{"mark":"a","family":"exponential","rate":1.0}],
         "atoms":[],"mass_at_infinity":"auto"}})";
    if (name == "compound_poisson")
        return R"({"schema_version":1,"kind":"multi_jump","seed":7,"horizon":1.0,
  "grid_steps":512,"max_jumps":64,
  "mark_space":[{"label":"plus","value":1.0},{"label":"minus","value":-1.0}],
  "rates":[0.5,0.5]})";
    if (name == "geometric_truncation")
        return R"({"schema_version":1,"kind":"truncation_family","seed":7,"horizon":1.0,
  "grid_steps":128,"first_value":0.5,"value_ratio":0.5,
  "first_intensity":1.5,"intensity_ratio":1.5,"max_level":14,
  "levels":[2,4,6],"reference_level":14,"num_paths":100000})";
    if (name == "cox")
        return R"({"schema_version":1,"kind":"cox","seed":7,"t":1.0,"eps":0.5,
  "n_levels":[100,1000,10000],"windows":[0.1,0.01],
  "num_paths":10000,"steps_per_min_window":16})";
    if (name == "joint")
        return R"({"schema_version":1,"kind":"joint_diffusion","seed":7,"horizon":1.0,
  "grid_steps":512,"y0":0.0,"variance":{"family":"linear","slope":1.0},
  "jump":{"mark_space":[{"label":"a","value":1.0}],"rates":[1.0],"max_jumps":64}})";
    if (name == "discrete")
        return R"({"schema_version":1,"kind":"discrete","seed":7,"horizon":1.0,
  "mark_space":[{"label":"up","value":1.0},{"label":"down","value":-1.0}],
  "slot_probabilities":[[0.2,0.1],[0.05,0.3],[0.15,0.15]]})";
    throw ScenarioError("unknown bundled scenario: " + name);
}

std::string bundled_payoff(const std::string& name) {
    if (name == "time_indicator")
        return R"({"schema_version":1,"kind":"time_indicator","threshold":1.0,"at_infinity":0.0})";
    if (name == "count") return R"({"schema_version":1,"kind":"count"})";
    if (name == "mark_sum") return R"({"schema_version":1,"kind":"mark_sum"})";
    if (name == "digital_no_jump")
        return R"({"schema_version":1,"kind":"product","terms":[{"coef":1.0,
  "continuous":{"kind":"digital","strike":0.0},
  "jump":{"kind":"count_eq","value":0}}]})";
    throw ScenarioError("unknown bundled payoff: " + name);
}

} // namespace jumprep
