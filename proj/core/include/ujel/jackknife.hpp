#pragma once

#include "ujel/dataset.hpp"
#include "ujel/kernel.hpp"
#include "ujel/ustat.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ujel {

/// Jackknife pseudo-values of a k-sample U-statistic.
///
/// `combined[l]` is the pseudo-value of pooled observation l when all groups are treated as
/// one sample of size n with a kernel of degree m = sum m_g. Its expectation is
/// theta * ev_coefficients[l], so the empirical-likelihood constraint for a trial theta is
/// sum_l p_l (combined[l] - theta * ev_coefficients[l]) = 0.
struct PseudoValueSet {
    std::vector<double> combined;
    /// group_pseudo[g][i] = n_g U - (n_g - 1) U^{(-i)} for observation i of group g.
    std::vector<std::vector<double>> group_pseudo;
    std::vector<double> ev_coefficients;
    double u_value = 0.0;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> degrees;

    std::size_t n() const noexcept { return combined.size(); }
    std::size_t k() const noexcept { return sizes.size(); }
    /// True when every c_l equals 1 (equal sizes and equal degrees).
    bool unit_coefficients() const noexcept;
};

struct JackknifeVariance {
    double sigma_hat_sq = 0.0;
    /// sum_i (V_i^(g) - mean_g)^2 / (n_g (n_g - 1)) for each group.
    std::vector<double> per_group_terms;
    /// (1/n) sum_l (V_l - theta c_l)^2, filled when a theta is supplied.
    std::optional<double> s_n_sq;

    double sigma_hat() const;
};

/// Per-group pseudo-values from group-wise leave-one-out statistics.
std::vector<std::vector<double>> group_pseudo_values(const UStatResult& ustat,
                                                     const MultiSampleDataset& data,
                                                     const KernelSpec& kernel);

/// Combined pseudo-values, built from the group pseudo-values with the pooled-deletion
/// identity
///   V_l = n U - (n-1) * n/(n-m) * (n_g - m_g)/n_g * (n_g U - V_g)/(n_g - 1)
/// for l in group g, instead of n pooled re-evaluations.
PseudoValueSet combined_pseudo_values(const UStatResult& ustat, const MultiSampleDataset& data,
                                      const KernelSpec& kernel);

/// leave_one_out followed by combined_pseudo_values.
PseudoValueSet pseudo_values(const MultiSampleDataset& data, const KernelSpec& kernel,
                             EvalPath path = EvalPath::Auto);

/// c_l = n/(n-m) * [n - m - (n-1)(n_g - m_g)/n_g] for every l in group g, laid out in
/// pooled order. E[V_l] = theta * c_l and (1/n) sum_l c_l = 1.
std::vector<double> ev_coefficients(std::span<const std::size_t> sizes,
                                    std::span<const std::size_t> degrees);

/// Jackknife variance estimator of U from the group pseudo-values.
JackknifeVariance jackknife_variance(const std::vector<std::vector<double>>& group_pseudo,
                                     double u_value, std::span<const std::size_t> sizes);

/// Same estimator from a PseudoValueSet; fills s_n_sq when theta is given.
JackknifeVariance jackknife_variance(const PseudoValueSet& pv,
                                     std::optional<double> theta = std::nullopt);

/// S_n^2 = (1/n) sum_l (V_l - theta c_l)^2.
double s_n_squared(const PseudoValueSet& pv, double theta);

}  // namespace ujel
