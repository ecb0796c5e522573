#pragma once

#include "ujel/interval.hpp"
#include "ujel/models.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ujel {

/// One model at one size vector. `row_key` and `size_key` are the table labels, e.g.
/// "(1,1,1;1,1,1;1,1,1)" and "(30,30,30)".
struct Scenario {
    std::string id;
    ModelSpec model;
    std::vector<std::size_t> sizes;
    std::string row_key;
    std::string size_key;
};

struct CoverageOptions {
    std::size_t reps = 500;
    std::uint64_t seed = 20240917;
    std::size_t workers = 1;
    double level = 0.95;
    std::size_t boot_B = 100;
};

struct CoverageReport {
    std::string scenario_id;
    std::string row_key;
    std::string size_key;
    CiMethod method = CiMethod::Jel;
    std::size_t reps = 0;
    std::size_t covered = 0;
    /// Replicates whose interval could not be built; they count as not covering.
    std::size_t failures = 0;
    double coverage_probability = 0.0;
    /// Mean width over the replicates that produced an interval.
    double average_length = 0.0;
    double true_theta = 0.0;
    double true_theta_error = 0.0;
    /// Replicates whose interval carried solver warnings (truncation, non-monotone profile).
    std::size_t flagged = 0;
    double wall_time = 0.0;
};

/// Builds one interval of the requested method on a dataset drawn by the harness.
ConfidenceInterval interval_for(CiMethod method, const MultiSampleDataset& data, double level,
                                std::size_t boot_B, std::uint64_t seed, std::uint64_t replicate);

/// Simulates `reps` datasets (replicate r drawn from stream (seed, stream_id(r, 0))) and scores
/// every method on the same datasets. Output does not depend on the worker count.
std::vector<CoverageReport> run_coverage(const Scenario& scenario, std::span<const CiMethod> methods,
                                         const CoverageOptions& options);

CoverageReport run_coverage(const Scenario& scenario, CiMethod method, const CoverageOptions& options);

}  // namespace ujel
