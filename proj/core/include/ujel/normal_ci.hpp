#pragma once

#include "ujel/interval.hpp"
#include "ujel/jackknife.hpp"

namespace ujel {

struct NormalCiResult {
    double estimate = 0.0;
    double sigma_hat = 0.0;
    double z = 0.0;
    ConfidenceInterval interval;
};

/// u -+ z sigma_hat with z the two-sided normal critical value. A zero variance yields the
/// degenerate interval [u, u] and a warning rather than an error.
NormalCiResult normal_ci(double u, const JackknifeVariance& var, double level);

}  // namespace ujel
