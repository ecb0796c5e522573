#pragma once

#include "ujel/dataset.hpp"
#include "ujel/kernel.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

enum class EvalPath {
    Auto,      ///< counting when the kernel allows it and the instance is not tiny
    Oracle,    ///< enumerate every index combination
    Counting,  ///< rank counting; only for order-indicator kernels of degree (1,...,1)
};

std::string_view to_string(EvalPath path);

struct EvaluationStats {
    std::uint64_t kernel_calls = 0;
    EvalPath path = EvalPath::Oracle;  ///< path actually taken, never Auto
    std::vector<std::string> warnings;
};

/// Full k-sample U-statistic plus every group-wise leave-one-out statistic.
struct UStatResult {
    double value = 0.0;
    /// Entry l is the U-statistic with pooled observation l deleted from its own group.
    std::vector<double> leave_one_out;
    /// Prefix sums of group sizes, length k + 1.
    std::vector<std::size_t> group_offsets;
    EvaluationStats stats;
};

/// Instances whose combination count is at or below this are enumerated under EvalPath::Auto.
inline constexpr double kAutoOracleCombinations = 4096.0;
/// Enumeration above this many kernel calls adds a warning.
inline constexpr double kKernelCallWarning = 1e8;

/// Number of index combinations prod_g C(n_g, m_g), as a double.
double combination_count(const MultiSampleDataset& data, const KernelSpec& kernel);

/// Exact average of the kernel over all prod_g C(n_g, m_g) combinations.
double u_statistic(const MultiSampleDataset& data, const KernelSpec& kernel,
                   EvalPath path = EvalPath::Auto);

/// U-statistic and all n group-wise leave-one-out values. Requires n_g >= m_g + 1.
UStatResult leave_one_out(const MultiSampleDataset& data, const KernelSpec& kernel,
                          EvalPath path = EvalPath::Auto);

}  // namespace ujel
