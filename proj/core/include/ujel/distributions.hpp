#pragma once

namespace ujel {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (Wichura's AS 241, relative error ~1e-16). p must lie in (0, 1).
double normal_quantile(double p);

/// Two-sided critical value z_{alpha/2} for a confidence level 1 - alpha.
double normal_critical_value(double level);

/// Quantile of the chi-square distribution with one degree of freedom at probability `level`.
double chi2_1_quantile(double level);

}  // namespace ujel
