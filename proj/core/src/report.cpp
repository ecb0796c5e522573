#include "ujel/report.hpp"

#include "ujel/csv_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace ujel {

namespace {

using nlohmann::ordered_json;

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

ordered_json meta_json(const ReportMeta& meta, std::string_view schema) {
    ordered_json j;
    j["schema"] = schema;
    j["command"] = meta.command;
    j["tool_version"] = meta.tool_version;
    j["seed"] = meta.seed;
    j["config_hash"] = meta.config_hash;
    return j;
}

void meta_comments(std::ostream& out, const ReportMeta& meta) {
    out << "# ujel " << meta.tool_version << " " << meta.command << "\n";
    out << "# seed " << meta.seed << "\n";
    out << "# config_hash " << meta.config_hash << "\n";
}

ordered_json estimate_json(const EstimateSummary& est) {
    ordered_json j;
    j["kernel"] = est.kernel;
    j["groups"] = est.group_labels;
    j["sizes"] = est.sizes;
    j["u"] = est.u_value;
    j["sigma_hat"] = est.sigma_hat;
    j["eval_path"] = est.eval_path;
    j["kernel_calls"] = est.kernel_calls;
    j["warnings"] = est.warnings;
    return j;
}

std::string sizes_text(const std::vector<std::size_t>& sizes) {
    std::vector<std::string> s;
    for (auto n : sizes) s.push_back(std::to_string(n));
    return join(s, ",");
}

void estimate_text(std::ostream& out, const EstimateSummary& est) {
    out << "kernel      " << est.kernel << "\n";
    out << "groups      " << join(est.group_labels, ", ") << "\n";
    out << "sizes       " << sizes_text(est.sizes) << "\n";
    out << "U           " << fixed(est.u_value, 6) << "\n";
    out << "sigma_hat   " << fixed(est.sigma_hat, 6) << "\n";
    out << "eval path   " << est.eval_path << " (" << est.kernel_calls << " kernel calls)\n";
    for (const auto& w : est.warnings) out << "warning: " << w << "\n";
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
    if (text == "text") return OutputFormat::Text;
    if (text == "json") return OutputFormat::Json;
    if (text == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

void write_estimate_report(std::ostream& out, const ReportMeta& meta, const EstimateSummary& est,
                           OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: {
            ordered_json j = meta_json(meta, "ujel.estimate-report/1");
            j["estimate"] = estimate_json(est);
            out << j.dump(2) << "\n";
            return;
        }
        case OutputFormat::Csv:
            meta_comments(out, meta);
            out << "kernel,sizes,u,sigma_hat,eval_path,kernel_calls\n";
            out << csv_quote(est.kernel) << ',' << csv_quote(sizes_text(est.sizes)) << ','
                << format_double(est.u_value) << ',' << format_double(est.sigma_hat) << ','
                << est.eval_path << ',' << est.kernel_calls << "\n";
            return;
        case OutputFormat::Text:
            out << "ujel " << meta.tool_version << "  seed " << meta.seed << "  config "
                << meta.config_hash << "\n";
            estimate_text(out, est);
            return;
    }
}

void write_ci_report(std::ostream& out, const ReportMeta& meta, const EstimateSummary& est,
                     const std::vector<ConfidenceInterval>& intervals, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: {
            ordered_json j = meta_json(meta, "ujel.ci-report/1");
            j["estimate"] = estimate_json(est);
            ordered_json list = ordered_json::array();
            for (const auto& ci : intervals) {
                ordered_json e;
                e["method"] = to_string(ci.method);
                e["level"] = ci.level;
                e["lower"] = ci.lower;
                e["upper"] = ci.upper;
                e["length"] = ci.length();
                e["point_estimate"] = ci.point_estimate;
                e["diagnostics"] = {{"iterations", ci.diagnostics.iterations},
                                    {"tolerance_achieved", ci.diagnostics.tolerance_achieved},
                                    {"eval_path", ci.diagnostics.eval_path},
                                    {"warnings", ci.diagnostics.warnings}};
                list.push_back(std::move(e));
            }
            j["intervals"] = std::move(list);
            out << j.dump(2) << "\n";
            return;
        }
        case OutputFormat::Csv:
            meta_comments(out, meta);
            out << "# kernel " << est.kernel << " u " << format_double(est.u_value) << " sigma_hat "
                << format_double(est.sigma_hat) << "\n";
            out << "method,level,lower,upper,length,point_estimate,iterations,eval_path,warnings\n";
            for (const auto& ci : intervals) {
                out << to_string(ci.method) << ',' << format_double(ci.level) << ','
                    << format_double(ci.lower) << ',' << format_double(ci.upper) << ','
                    << format_double(ci.length()) << ',' << format_double(ci.point_estimate) << ','
                    << ci.diagnostics.iterations << ',' << ci.diagnostics.eval_path << ','
                    << csv_quote(join(ci.diagnostics.warnings, "; ")) << "\n";
            }
            return;
        case OutputFormat::Text:
            out << "ujel " << meta.tool_version << "  seed " << meta.seed << "  config "
                << meta.config_hash << "\n";
            estimate_text(out, est);
            out << "\n" << std::left << std::setw(13) << "method" << std::setw(8) << "level"
                << std::setw(12) << "lower" << std::setw(12) << "upper" << std::setw(10) << "length"
                << "\n";
            for (const auto& ci : intervals) {
                out << std::left << std::setw(13) << to_string(ci.method) << std::setw(8)
                    << fixed(ci.level, 3) << std::setw(12) << fixed(ci.lower, 6) << std::setw(12)
                    << fixed(ci.upper, 6) << std::setw(10) << fixed(ci.length(), 6) << "\n";
                for (const auto& w : ci.diagnostics.warnings) out << "  warning: " << w << "\n";
            }
            return;
    }
}

void write_coverage_report(std::ostream& out, const ReportMeta& meta,
                           const std::vector<CoverageReport>& rows, double level, OutputFormat format,
                           bool timing) {
    switch (format) {
        case OutputFormat::Json: {
            ordered_json j = meta_json(meta, "ujel.coverage-report/1");
            j["level"] = level;
            ordered_json list = ordered_json::array();
            for (const auto& r : rows) {
                ordered_json e;
                e["scenario"] = r.scenario_id;
                e["params"] = r.row_key;
                e["sizes"] = r.size_key;
                e["method"] = to_string(r.method);
                e["reps"] = r.reps;
                e["cp_percent"] = 100.0 * r.coverage_probability;
                e["al"] = r.average_length;
                e["covered"] = r.covered;
                e["failures"] = r.failures;
                e["flagged"] = r.flagged;
                e["true_theta"] = r.true_theta;
                e["true_theta_error"] = r.true_theta_error;
                if (timing) e["wall_time"] = r.wall_time;
                list.push_back(std::move(e));
            }
            j["rows"] = std::move(list);
            out << j.dump(2) << "\n";
            return;
        }
        case OutputFormat::Csv:
            meta_comments(out, meta);
            out << "# level " << format_double(level) << "\n";
            out << "scenario,params,sizes,method,reps,cp_percent,al,covered,failures,flagged,true_theta";
            if (timing) out << ",wall_time";
            out << "\n";
            for (const auto& r : rows) {
                out << csv_quote(r.scenario_id) << ',' << csv_quote(r.row_key) << ','
                    << csv_quote(r.size_key) << ',' << to_string(r.method) << ',' << r.reps << ','
                    << format_double(100.0 * r.coverage_probability) << ','
                    << format_double(r.average_length) << ',' << r.covered << ',' << r.failures << ','
                    << r.flagged << ',' << format_double(r.true_theta);
                if (timing) out << ',' << format_double(r.wall_time);
                out << "\n";
            }
            return;
        case OutputFormat::Text: {
            out << "ujel " << meta.tool_version << "  seed " << meta.seed << "  config "
                << meta.config_hash << "  level " << fixed(level, 3) << "\n";
            // One line per (params, sizes) with CP (%) and AL per method, like a results table.
            std::vector<CiMethod> methods;
            for (const auto& r : rows) {
                if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
                    methods.push_back(r.method);
                }
            }
            int params_width = 40;
            for (const auto& r : rows) {
                params_width = std::max(params_width, static_cast<int>(r.row_key.size()) + 2);
            }
            out << std::left << std::setw(params_width) << "params" << std::setw(16) << "sizes";
            for (auto m : methods) {
                out << std::setw(22) << (std::string(to_string(m)) + " CP%/AL");
            }
            out << "true_theta\n";
            std::vector<std::pair<std::string, std::string>> keys;
            std::map<std::pair<std::string, std::string>, std::map<CiMethod, const CoverageReport*>> cells;
            for (const auto& r : rows) {
                const auto key = std::make_pair(r.row_key, r.size_key);
                if (!cells.count(key)) keys.push_back(key);
                cells[key][r.method] = &r;
            }
            std::string previous;
            for (const auto& key : keys) {
                out << std::setw(params_width) << (key.first == previous ? std::string() : key.first)
                    << std::setw(16) << key.second;
                previous = key.first;
                double theta = 0.0;
                std::size_t failures = 0;
                for (auto m : methods) {
                    const auto it = cells[key].find(m);
                    if (it == cells[key].end()) {
                        out << std::setw(22) << "-";
                        continue;
                    }
                    const auto& r = *it->second;
                    theta = r.true_theta;
                    failures += r.failures;
                    out << std::setw(22)
                        << (fixed(100.0 * r.coverage_probability, 1) + " / " + fixed(r.average_length, 3));
                }
                out << fixed(theta, 6);
                if (failures) out << "  (" << failures << " failed)";
                if (timing) out << "  " << fixed(cells[key].begin()->second->wall_time, 2) << "s";
                out << "\n";
            }
            return;
        }
    }
}

}  // namespace ujel
