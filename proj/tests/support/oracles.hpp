#pragma once

// Reference implementations used only by tests. They follow the defining formulas literally
// and share no code with the library's fast paths.

#include "ujel/dataset.hpp"
#include "ujel/kernel.hpp"
#include "ujel/smoothed.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ujel::oracle {

/// Average of h over every combination, by recursion over groups.
double u_statistic(const MultiSampleDataset& data, const KernelSpec& kernel);

/// U-statistic recomputed on a copy with pooled observation l removed.
double leave_one_out(const MultiSampleDataset& data, const KernelSpec& kernel, std::size_t l);

/// V_l = n U_n - (n-1) U_{n-1}^{(-l)} with both statistics taken over m-subsets of the pooled
/// sample and the kernel weighted by c* = C(n,m) / prod C(n_g,m_g) on admissible subsets.
std::vector<double> pooled_pseudo_values(const MultiSampleDataset& data, const KernelSpec& kernel);

/// Lagrange multiplier by long-double bisection on (-1/max d, -1/min d).
long double lambda_bisection(std::span<const double> d);

/// max over probability vectors p of sum log(n p_i) subject to sum p_i d_i = 0, by nested
/// golden-section search; valid only for four points.
double primal_log_el_four_points(std::span<const double> d);

/// Triple sum of the smoothed estimator without the separable factorisation.
double smoothed_theta_direct(const MultiSampleDataset& data, const BandwidthSet& bw);

/// Random dataset with continuous uniform entries scaled by `spread`.
MultiSampleDataset random_dataset(std::span<const std::size_t> sizes, std::size_t q, std::uint64_t seed,
                                  double spread = 1.0);

/// Random dataset on a coarse integer grid, so ties across groups are common.
MultiSampleDataset random_tied_dataset(std::span<const std::size_t> sizes, std::size_t q,
                                       std::uint64_t seed);

}  // namespace ujel::oracle
