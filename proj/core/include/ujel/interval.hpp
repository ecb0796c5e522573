#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

enum class CiMethod { Jel, NormalApprox, KernelBootstrap };

std::string_view to_string(CiMethod method);
/// Accepts the CLI spellings "jel", "normal", "kernel-boot".
std::optional<CiMethod> parse_ci_method(std::string_view text);

struct CiDiagnostics {
    /// Solver iterations (lambda solves plus bracketing/bisection steps) or bootstrap replicates.
    std::size_t iterations = 0;
    /// Final endpoint bracket width (JEL) or zero for closed-form intervals.
    double tolerance_achieved = 0.0;
    std::string eval_path;
    std::vector<std::string> warnings;
};

struct ConfidenceInterval {
    CiMethod method = CiMethod::Jel;
    double level = 0.95;
    double lower = 0.0;
    double upper = 0.0;
    double point_estimate = 0.0;
    CiDiagnostics diagnostics;

    double length() const noexcept { return upper - lower; }
    bool contains(double theta) const noexcept { return lower <= theta && theta <= upper; }
};

}  // namespace ujel
