// jumprep command line: scenario-driven construction and verification of
// martingale representations for jump processes.

#include "jumprep/calculus.hpp"
#include "jumprep/counterexample.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/multi_jump.hpp"
#include "jumprep/report.hpp"
#include "jumprep/rng.hpp"
#include "jumprep/scenario.hpp"
#include "jumprep/single_jump.hpp"
#include "jumprep/suite.hpp"
#include "jumprep/truncation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace jumprep;

struct CommonFlags {
    std::string scenario_path;
    std::string payoff_path;
    std::string out_path;
    std::string format = "csv";
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::size_t grid = 0;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool scenario_required = true) {
    auto* opt = cmd->add_option("--scenario", flags.scenario_path, "scenario JSON file");
    if (scenario_required) opt->required();
    cmd->add_option("--payoff", flags.payoff_path, "payoff JSON file");
    cmd->add_option("--out", flags.out_path, "output file (default: stdout)");
    cmd->add_option("--format", flags.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--paths", flags.paths, "Monte Carlo path count");
    cmd->add_option("--seed", flags.seed, "seed override");
    cmd->add_option("--grid", flags.grid, "grid-steps override");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
}

void write_report(const Report& report, const CommonFlags& flags) {
    const ReportFormat format = parse_format(flags.format);
    if (flags.out_path.empty())
        emit_results(report, format, std::cout);
    else
        emit_results(report, format, flags.out_path);
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ScenarioError("cannot open output file: " + out_path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_gen(const CommonFlags& flags, const std::string& example,
            std::size_t default_paths) {
    if (!example.empty()) {
        write_text(bundled_scenario(example) + "\n", flags.out_path);
        return 0;
    }

    const Scenario scenario = load_scenario(flags.scenario_path);
    const std::uint64_t seed = flags.seed ? flags.seed : scenario.seed;
    const std::size_t n = flags.paths ? flags.paths : default_paths;

    std::ostringstream csv;
    csv << "path,event_time,mark\n";

    if (scenario.kind == "single_jump") {
        const auto& sc = scenario.single_jump();
        for (std::size_t i = 0; i < n; ++i) {
            CounterStream rng(seed, i, stream_tag::events);
            const JumpEvent e = sc.law->sample(rng);
            if (e.is_jump() && e.time <= sc.observe_horizon)
                csv << i << ',' << fmt(e.time) << ','
                    << sc.law->marks().at(e.mark).label << '\n';
        }
    } else if (scenario.kind == "multi_jump") {
        const auto model = scenario.multi_jump().model;
        for (std::size_t i = 0; i < n; ++i) {
            CounterStream rng(seed, i, stream_tag::events);
            const JumpPath path = model->sample_path(rng);
            for (const auto& e : path.events)
                csv << i << ',' << fmt(e.time) << ','
                    << model->marks().at(e.mark).label << '\n';
        }
    } else if (scenario.kind == "truncation_family") {
        const auto& sc = scenario.truncation();
        const auto model = sc.family.level_model(sc.reference_level);
        for (std::size_t i = 0; i < n; ++i) {
            CounterStream rng(seed, i, stream_tag::events);
            const JumpPath path = model.sample_path(rng);
            for (const auto& e : path.events)
                csv << i << ',' << fmt(e.time) << ','
                    << model.marks().at(e.mark).label << '\n';
        }
    } else if (scenario.kind == "discrete") {
        const auto model = scenario.discrete().model;
        for (std::size_t i = 0; i < n; ++i) {
            CounterStream rng(seed, i, stream_tag::events);
            std::vector<int> history;
            for (std::size_t k = 0; k < model->slots(); ++k) {
                const auto p = model->probabilities(k, history);
                std::vector<double> cum(p.size());
                double c = 0.0;
                for (std::size_t z = 0; z < p.size(); ++z) {
                    c += p[z];
                    cum[z] = c;
                }
                const double u = rng.uniform01();
                int code = 0;
                if (c > 0.0 && u < c) {
                    std::size_t z = 0;
                    while (cum[z] <= u) ++z;
                    code = int(z) + 1;
                    csv << i << ',' << fmt(model->slot_time(k)) << ','
                        << model->marks().at(z).label << '\n';
                }
                history.push_back(code);
            }
        }
    } else {
        throw ScenarioError("gen does not support scenario kind '" + scenario.kind + "'");
    }

    write_text(csv.str(), flags.out_path);
    return 0;
}

int cmd_represent(const CommonFlags& flags) {
    const Scenario scenario = load_scenario(flags.scenario_path);
    const auto& sc = scenario.single_jump();
    if (flags.payoff_path.empty()) throw ScenarioError("represent needs --payoff");
    const PayoffFile file = load_payoff(flags.payoff_path);
    const PayoffFunctional h = make_single_jump_payoff(file, sc.law->marks());
    const PayoffFunctional centered = center_payoff(h, *sc.law);
    const PredictableField g = chou_meyer_integrand(centered, sc.law);

    const std::size_t steps = flags.grid ? flags.grid : sc.grid_steps;
    const TimeGrid grid{sc.law->grid().horizon, steps};

    std::ostringstream csv;
    csv << "t,mark,value\n";
    for (std::size_t i = 0; i <= grid.steps; ++i) {
        const double t = grid.node(i);
        for (std::size_t z = 0; z < sc.law->marks().size(); ++z)
            csv << fmt(t) << ',' << sc.law->marks().at(z).label << ',' << fmt(g(t, z))
                << '\n';
    }
    write_text(csv.str(), flags.out_path);
    std::cerr << "m0 " << fmt(centered.m0()) << "\n";
    return 0;
}

int cmd_verify(const CommonFlags& flags, const std::vector<std::string>& checks) {
    const Scenario scenario = load_scenario(flags.scenario_path);
    SuiteOptions options;
    options.selection = checks;
    if (flags.paths) options.num_paths = flags.paths;
    options.threads = flags.threads;
    options.seed_override = flags.seed;
    const Report report = run_property_suite(scenario, options);
    write_report(report, flags);
    for (const auto& row : report.rows)
        std::cerr << row.check << ": " << (row.status ? *row.status : "?") << "\n";
    return report.all_passed() ? 0 : 1;
}

int cmd_truncate(const CommonFlags& flags, const std::string& levels_csv,
                 const std::string& payoff_kind) {
    const Scenario scenario = load_scenario(flags.scenario_path);
    auto sc = scenario.truncation();
    if (!levels_csv.empty()) {
        sc.levels.clear();
        std::stringstream ss(levels_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            sc.levels.push_back(static_cast<std::size_t>(std::stoul(item)));
    }
    if (flags.paths) sc.num_paths = flags.paths;
    const std::uint64_t seed = flags.seed ? flags.seed : scenario.seed;

    const StudyPayoffKind kind = payoff_kind == "indicator_positive"
                                     ? StudyPayoffKind::indicator_positive
                                     : StudyPayoffKind::mark_sum;
    const auto study = truncation_study(sc.family, kind, sc.levels, sc.reference_level,
                                        sc.num_paths, seed, flags.threads);

    Report report;
    for (const auto& row : study.rows) {
        auto add = [&](const std::string& name, double value,
                       std::optional<double> se = std::nullopt) {
            ResultRow r;
            r.check = name;
            r.level = double(row.level);
            r.value = value;
            r.std_error = se;
            report.rows.push_back(std::move(r));
        };
        add("m0", row.m0);
        add("residual_l2", row.residual, row.residual_se);
        if (!std::isnan(row.target)) add("residual_target", row.target);
        if (row.level != study.rows.front().level) {
            add("gap_isometry", row.gap_prev, row.gap_prev_se);
            add("gap_form", row.form_gap_prev, row.form_gap_prev_se);
        }
    }
    {
        ResultRow r;
        r.check = "cap_hit_fraction";
        r.value = double(study.cap_hits) / double(study.num_paths);
        r.tolerance = 1e-3;
        r.status = *r.value < 1e-3 ? "pass" : "fail";
        report.rows.push_back(std::move(r));
    }
    {
        ResultRow r;
        r.check = "gaps_decreasing";
        r.value = study.gaps_decreasing ? 1.0 : 0.0;
        r.status = study.gaps_decreasing ? "pass" : "fail";
        report.rows.push_back(std::move(r));
    }
    write_report(report, flags);
    return report.all_passed() ? 0 : 1;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

int cmd_counterexample(const CommonFlags& flags, const std::string& n_csv,
                       const std::string& h_csv, double t, double eps) {
    CoxParams params;
    if (!flags.scenario_path.empty()) {
        const Scenario scenario = load_scenario(flags.scenario_path);
        params = scenario.cox().params;
        params.seed = scenario.seed;
    }
    if (!n_csv.empty()) params.n_levels = parse_double_list(n_csv);
    if (!h_csv.empty()) params.windows = parse_double_list(h_csv);
    if (t > 0.0) params.t = t;
    if (eps > 0.0) params.eps = eps;
    if (flags.paths) params.num_paths = flags.paths;
    if (flags.seed) params.seed = flags.seed;
    if (flags.grid) params.steps_per_min_window = flags.grid;
    params.threads = flags.threads;

    const auto result = cox_counterexample_experiment(params);
    Report report;
    for (const auto& cell : result.cells) {
        auto add = [&](const std::string& name, double value,
                       std::optional<double> se = std::nullopt,
                       std::optional<double> tol = std::nullopt,
                       std::optional<std::string> status = std::nullopt) {
            ResultRow r;
            r.check = name;
            r.t = cell.h; // window length
            r.level = cell.n;
            r.value = value;
            r.std_error = se;
            r.tolerance = tol;
            r.status = std::move(status);
            report.rows.push_back(std::move(r));
        };
        add("exceed_probability", cell.exceed_prob, cell.exceed_se, cell.bound_plain,
            cell.exceed_prob <= cell.bound_plain + 3.0 * cell.exceed_se ? "pass"
                                                                        : "fail");
        add("exceed_probability_exact_center", cell.exceed_prob_exact_center,
            cell.exceed_se, cell.bound_exact,
            cell.exceed_prob_exact_center <= cell.bound_exact + 3.0 * cell.exceed_se
                ? "pass"
                : "fail");
        add("window_factor", cell.exact_factor);
        add("mse", cell.mse, cell.mse_se);
        add("mean_estimate", cell.mean_est, cell.mean_est_se);
    }
    {
        ResultRow r;
        r.check = "mse_monotone_in_n";
        r.value = result.mse_monotone_in_n ? 1.0 : 0.0;
        r.status = result.mse_monotone_in_n ? "pass" : "fail";
        report.rows.push_back(std::move(r));
    }
    {
        ResultRow r;
        r.check = "conditional_mean_gap";
        r.value = std::fabs(result.frozen.mean_est - result.frozen.target);
        r.std_error = result.frozen.se;
        r.tolerance = 4.0 * result.frozen.se;
        r.status = *r.value <= 4.0 * result.frozen.se ? "pass" : "fail";
        report.rows.push_back(std::move(r));
    }
    write_report(report, flags);
    return report.all_passed() ? 0 : 1;
}

int cmd_hedge(const CommonFlags& flags) {
    const Scenario scenario = load_scenario(flags.scenario_path);
    const auto& sc = scenario.joint();
    if (flags.payoff_path.empty()) throw ScenarioError("hedge needs --payoff");
    const PayoffFile file = load_payoff(flags.payoff_path);
    const auto rep = make_weak_representation(file, sc);

    JointModel model{sc.diffusion, *sc.jumps, sc.y0};
    const std::size_t n = flags.paths ? flags.paths : 100000;
    const std::uint64_t seed = flags.seed ? flags.seed : scenario.seed;
    const auto result =
        replicate(rep, model, n, seed, flags.threads, flags.grid ? flags.grid : 0);

    Report report;
    auto add = [&](const std::string& name, double value,
                   std::optional<double> se = std::nullopt,
                   std::optional<double> tol = std::nullopt,
                   std::optional<std::string> status = std::nullopt) {
        ResultRow r;
        r.check = name;
        r.value = value;
        r.std_error = se;
        r.tolerance = tol;
        r.status = std::move(status);
        report.rows.push_back(std::move(r));
    };
    add("m0", rep.m0);
    add("replication_mean_error", result.mean_error, result.mean_error_se,
        3.0 * result.mean_error_se,
        std::fabs(result.mean_error) <= 3.0 * std::max(result.mean_error_se, 1e-300)
            ? "pass"
            : "fail");
    add("replication_rms_error", result.rms_error, result.rms_error_se);
    add("orthogonality_cov", result.orthogonality_cov, result.orthogonality_se,
        4.0 * result.orthogonality_se,
        std::fabs(result.orthogonality_cov) <=
                4.0 * std::max(result.orthogonality_se, 1e-300)
            ? "pass"
            : "fail");
    write_report(report, flags);
    return report.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"martingale representations for jump processes"};
    app.require_subcommand(1);

    CommonFlags gen_flags, rep_flags, ver_flags, tru_flags, cox_flags, hed_flags;
    std::string gen_example;
    std::vector<std::string> verify_checks;
    std::string truncate_levels;
    std::string truncate_payoff = "mark_sum";
    std::string cox_n, cox_h;
    double cox_t = 0.0, cox_eps = 0.0;

    auto* gen = app.add_subcommand(
        "gen", "sample paths from a scenario, or emit a bundled scenario");
    add_common(gen, gen_flags, false);
    gen->add_option("--example", gen_example,
                    "write a bundled scenario (exponential, compound_poisson, "
                    "geometric_truncation, cox, joint, discrete)");

    auto* represent = app.add_subcommand(
        "represent", "emit the representation integrand g as CSV {t, mark, value}");
    add_common(represent, rep_flags);

    auto* verify = app.add_subcommand("verify", "run the property suite for a scenario");
    add_common(verify, ver_flags);
    verify->add_option("--suite", verify_checks, "subset of checks to run");

    auto* truncate = app.add_subcommand("truncate", "truncation convergence study");
    add_common(truncate, tru_flags);
    truncate->add_option("--levels", truncate_levels, "comma-separated levels");
    truncate->add_option("--study-payoff", truncate_payoff,
                         "mark_sum|indicator_positive")
        ->check(CLI::IsMember({"mark_sum", "indicator_positive"}));

    auto* cox = app.add_subcommand(
        "counterexample", "windowed recovery of the hidden intensity driver");
    add_common(cox, cox_flags, false);
    cox->add_option("--n", cox_n, "comma-separated n levels");
    cox->add_option("--h", cox_h, "comma-separated window lengths");
    cox->add_option("--t", cox_t, "window start time");
    cox->add_option("--eps", cox_eps, "deviation threshold");

    auto* hedge =
        app.add_subcommand("hedge", "replicate a joint diffusion/jump payoff");
    add_common(hedge, hed_flags);

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            if (gen_example.empty() && gen_flags.scenario_path.empty())
                throw ScenarioError("gen needs --scenario or --example");
            return cmd_gen(gen_flags, gen_example, 10);
        }
        if (represent->parsed()) return cmd_represent(rep_flags);
        if (verify->parsed()) return cmd_verify(ver_flags, verify_checks);
        if (truncate->parsed())
            return cmd_truncate(tru_flags, truncate_levels, truncate_payoff);
        if (cox->parsed())
            return cmd_counterexample(cox_flags, cox_n, cox_h, cox_t, cox_eps);
        if (hedge->parsed()) return cmd_hedge(hed_flags);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DiagnosticError& e) {
        std::cerr << "diagnostic: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
