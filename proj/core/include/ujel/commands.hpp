#pragma once

#include "ujel/interval.hpp"
#include "ujel/report.hpp"
#include "ujel/ustat.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ujel {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Everything a subcommand needs. Unset optionals fall back to the scenario file (simulate) or
/// the built-in defaults.
struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::optional<std::string> group_column;
    std::vector<std::string> order;
    std::string kernel = "vus-diff";
    std::vector<CiMethod> methods;
    std::vector<double> levels;
    std::optional<std::size_t> boot_B;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    OutputFormat format = OutputFormat::Text;
    std::string scenario_path;
    EvalPath path = EvalPath::Auto;
    bool timing = false;

    /// Canonical text of every setting that affects results. Excludes workers and timing.
    std::string canonical() const;
    std::string hash() const;
};

/// U-statistic and jackknife standard error.
int cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One interval per (method, level); methods default to all three, levels to 0.95.
int cmd_ci(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Coverage study over every scenario in the scenario file.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Fast internal consistency checks; prints one line per check.
int cmd_selftest(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand. InputError -> 2, NumericError -> 1.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ujel
