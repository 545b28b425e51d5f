#include "jumprep/report.hpp"

#include "jumprep/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace jumprep {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

bool Report::all_passed() const { return failures() == 0; }

std::size_t Report::failures() const {
    std::size_t n = 0;
    for (const auto& row : rows)
        if (row.status && *row.status == "fail") ++n;
    return n;
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ScenarioError("unknown report format: " + name);
}

void emit_results(const Report& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        out << "check,t,level,value,std_error,tolerance,status\n";
        for (const auto& r : report.rows) {
            out << r.check << ',';
            if (r.t) out << format_double(*r.t);
            out << ',';
            if (r.level) out << format_double(*r.level);
            out << ',';
            if (r.value) out << format_double(*r.value);
            out << ',';
            if (r.std_error) out << format_double(*r.std_error);
            out << ',';
            if (r.tolerance) out << format_double(*r.tolerance);
            out << ',';
            if (r.status) out << *r.status;
            out << '\n';
        }
        return;
    }

    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["check"] = r.check;
        if (r.t) row["t"] = *r.t;
        if (r.level) row["level"] = *r.level;
        if (r.value) row["value"] = *r.value;
        if (r.std_error) row["std_error"] = *r.std_error;
        if (r.tolerance) row["tolerance"] = *r.tolerance;
        if (r.status) row["status"] = *r.status;
        doc["rows"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void emit_results(const Report& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot open output file: " + path);
    emit_results(report, format, out);
    if (!out) throw ScenarioError("failed while writing: " + path);
}

std::string to_string(const Report& report, ReportFormat format) {
    std::ostringstream out;
    emit_results(report, format, out);
    return out.str();
}

Report parse_report_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("bad report JSON: ") + e.what());
    }
    if (!doc.contains("rows") || !doc["rows"].is_array())
        throw ScenarioError("report JSON needs a rows array");
    Report report;
    for (const auto& row : doc["rows"]) {
        ResultRow r;
        r.check = row.at("check").get<std::string>();
        if (row.contains("t")) r.t = row["t"].get<double>();
        if (row.contains("level")) r.level = row["level"].get<double>();
        if (row.contains("value")) r.value = row["value"].get<double>();
        if (row.contains("std_error")) r.std_error = row["std_error"].get<double>();
        if (row.contains("tolerance")) r.tolerance = row["tolerance"].get<double>();
        if (row.contains("status")) r.status = row["status"].get<std::string>();
        report.rows.push_back(std::move(r));
    }
    return report;
}

} // namespace jumprep
