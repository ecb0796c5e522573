#pragma once

#include "ujel/interval.hpp"
#include "ujel/jackknife.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ujel {

/// Jackknife empirical likelihood ratio at one trial theta.
struct JelEvaluation {
    double theta = 0.0;
    double lambda = 0.0;
    double log_r = 0.0;
    double minus_2_log_r = 0.0;
    /// p_i = 1 / (n (1 + lambda d_i)); empty unless requested.
    std::vector<double> weights;
    bool converged = false;
    std::size_t iterations = 0;
    /// |(1/n) sum d_i / (1 + lambda d_i)| at the returned lambda.
    double residual = 0.0;
};

struct LambdaSolution {
    double lambda = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct JelOptions {
    double lambda_tolerance = 1e-10;
    std::size_t max_newton_steps = 100;
    double theta_tolerance = 1e-8;
    std::size_t max_bisection_steps = 200;
    /// Outward scan step in units of the jackknife standard error.
    double scan_step_sigmas = 0.5;
    /// Linear scan steps before the step starts doubling.
    std::size_t linear_scan_steps = 40;
    std::size_t max_scan_steps = 100;
};

/// Solves (1/n) sum d_i / (1 + lambda d_i) = 0 on (-1/max d, -1/min d) by safeguarded Newton.
/// Throws InfeasibleThetaError unless min d < 0 < max d, ConvergenceError after too many steps.
LambdaSolution solve_lambda(std::span<const double> deviations, const JelOptions& options = {});

/// Lagrange multiplier for the constraint sum p_i (V_i - theta c_i) = 0.
double solve_lambda(const PseudoValueSet& pv, double theta, const JelOptions& options = {});

/// log R(theta) = -sum log(1 + lambda (V_i - theta c_i)).
JelEvaluation log_jel_ratio(const PseudoValueSet& pv, double theta, bool with_weights = false,
                            const JelOptions& options = {});

/// {theta : -2 log R(theta) <= chi2_1 quantile at `level`}, located by an outward scan from
/// U_n followed by bisection on each side.
ConfidenceInterval jel_confidence_interval(const PseudoValueSet& pv, double level,
                                           const JelOptions& options = {});

}  // namespace ujel
