#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jumprep {

/// One emitted result: a named check or quantity with optional coordinates,
/// uncertainty, tolerance and verdict.
struct ResultRow {
    std::string check;
    std::optional<double> t;
    std::optional<double> level;
    std::optional<double> value;
    std::optional<double> std_error;
    std::optional<double> tolerance;
    std::optional<std::string> status; // "pass" | "fail" | "skip"
};

struct Report {
    std::vector<ResultRow> rows;

    bool all_passed() const;
    std::size_t failures() const;
};

enum class ReportFormat { csv, json };

/// "csv" or "json"; anything else raises ScenarioError.
ReportFormat parse_format(const std::string& name);

/// Deterministic byte output: fixed column order, %.17g doubles, ordered
/// JSON keys.
void emit_results(const Report& report, ReportFormat format, std::ostream& out);
void emit_results(const Report& report, ReportFormat format, const std::string& path);
std::string to_string(const Report& report, ReportFormat format);

/// Inverse of the JSON emitter; emit(parse(emit(r))) == emit(r).
Report parse_report_json(const std::string& text);

} // namespace jumprep
