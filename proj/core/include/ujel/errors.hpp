#pragma once

#include <stdexcept>
#include <string>

namespace ujel {

/// Malformed input: shapes, non-finite values, unknown names, bad parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a result for otherwise valid input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The trial parameter lies outside the convex hull of the centered pseudo-values.
class InfeasibleThetaError : public NumericError {
public:
    InfeasibleThetaError(const std::string& what, double theta)
        : NumericError(what), theta_(theta) {}
    double theta() const noexcept { return theta_; }

private:
    double theta_;
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Pseudo-values (or a resampled column) carry no spread, so no interval can be formed.
class DegenerateError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace ujel
