#pragma once

#include "ujel/coverage.hpp"
#include "ujel/interval.hpp"
#include "ujel/models.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

/// One `[scenario]` block: a model and the size vectors to run it at.
struct ScenarioBlock {
    std::string id;
    std::string family;
    ModelSpec model;
    /// Parameter text as written, whitespace removed, e.g. "1,1,1;1,1,1;1,1,1".
    std::string params_text;
    std::vector<std::vector<std::size_t>> sizes;
};

/// Simulation study file. Global keys come before the first `[scenario]` header:
///
///     seed = 20240917
///     reps = 500
///     boot_B = 100
///     level = 0.95
///     methods = jel, normal, kernel-boot
///
///     [scenario]
///     id = mobve-symmetric
///     model = mobve                 # or fgm-pareto
///     params = 1,1,1; 1,1,1; 1,1,1  # one group per ';', fractions like 1/3 allowed
///     sizes = 10,10,10; 30,30,30    # one size vector per ';'
///
/// `#` starts a comment. MOBVE groups take (lambda1, lambda2, lambda3); FGM-Pareto groups take
/// (scale1, scale2, shape1, shape2, copula).
struct SimulationConfig {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> boot_B;
    std::optional<double> level;
    std::vector<CiMethod> methods;
    std::vector<ScenarioBlock> blocks;

    /// One Scenario per (block, size vector), in file order.
    std::vector<Scenario> expand() const;
};

/// Throws InputError with a parameter path such as "scenario[2].params.group[3][1]".
SimulationConfig parse_simulation_config(std::string_view text);
SimulationConfig load_simulation_config(const std::string& path);

/// Parses "1", "0.5", "-2e-3" or a fraction "1/3".
std::optional<double> parse_number(std::string_view text);

std::string read_text_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

}  // namespace ujel
