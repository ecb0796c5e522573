#pragma once

#include "ujel/coverage.hpp"
#include "ujel/interval.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

enum class OutputFormat { Text, Json, Csv };

std::optional<OutputFormat> parse_output_format(std::string_view text);

/// Reproducibility stamp carried by every report.
struct ReportMeta {
    std::string command;
    std::string tool_version;
    std::uint64_t seed = 0;
    std::string config_hash;
};

struct EstimateSummary {
    std::string kernel;
    std::vector<std::string> group_labels;
    std::vector<std::size_t> sizes;
    double u_value = 0.0;
    double sigma_hat = 0.0;
    std::string eval_path;
    std::uint64_t kernel_calls = 0;
    std::vector<std::string> warnings;
};

void write_estimate_report(std::ostream& out, const ReportMeta& meta, const EstimateSummary& est,
                           OutputFormat format);

/// Intervals are printed in the given order.
void write_ci_report(std::ostream& out, const ReportMeta& meta, const EstimateSummary& est,
                     const std::vector<ConfidenceInterval>& intervals, OutputFormat format);

/// Rows in the given order; wall_time only when `timing` is set so reports stay byte-stable.
void write_coverage_report(std::ostream& out, const ReportMeta& meta,
                           const std::vector<CoverageReport>& rows, double level, OutputFormat format,
                           bool timing);

}  // namespace ujel
