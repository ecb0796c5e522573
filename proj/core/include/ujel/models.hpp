#pragma once

#include "ujel/dataset.hpp"
#include "ujel/matrix.hpp"
#include "ujel/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ujel {

/// Marshall-Olkin bivariate exponential: (min(E1,E3), min(E2,E3)), E_i ~ Exp(lambda_i).
struct MobveParams {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;

    void validate() const;
};

/// Pareto(scale_i, shape_i) marginals joined by an FGM copula with parameter `copula`.
struct FgmParetoParams {
    double scale1 = 1.0;
    double scale2 = 1.0;
    double shape1 = 1.0;
    double shape2 = 1.0;
    double copula = 0.0;

    void validate() const;
};

using GroupModel = std::variant<MobveParams, FgmParetoParams>;

/// One bivariate model per group.
struct ModelSpec {
    std::vector<GroupModel> groups;

    std::size_t k() const noexcept { return groups.size(); }
    void validate() const;
};

/// Univariate marginal of one coordinate of a group model.
struct Marginal {
    enum class Kind { Exponential, Pareto };
    Kind kind = Kind::Exponential;
    /// Rate for exponentials, scale for Pareto.
    double a = 1.0;
    /// Pareto shape; unused for exponentials.
    double b = 1.0;

    double cdf(double x) const;
    double quantile(double u) const;
};

Marginal marginal(const GroupModel& model, std::size_t coordinate);

Matrix sample_mobve(const MobveParams& params, std::size_t n, RandomStream& rng);
Matrix sample_fgm_pareto(const FgmParetoParams& params, std::size_t n, RandomStream& rng);
Matrix sample_group(const GroupModel& model, std::size_t n, RandomStream& rng);

/// Draws group g with sizes[g] rows from model.groups[g], groups in order from one stream.
MultiSampleDataset simulate_dataset(const ModelSpec& model, std::span<const std::size_t> sizes,
                                    RandomStream& rng);

struct TrueTheta {
    double value = 0.0;
    /// Quadrature error estimate, or the Monte Carlo standard error.
    double error = 0.0;
    bool monte_carlo = false;
};

/// P(X1 < ... < Xk) for independent continuous marginals, by adaptive Gauss-Kronrod in the
/// probability scale of the middle variable. Supports k = 2 and k = 3.
double chain_probability(std::span<const Marginal> marginals, double* error_estimate = nullptr);

/// theta = P(chain in coordinate 1) - P(chain in coordinate 2), the target of the vus-diff and
/// hum-diff kernels. Quadrature for k <= 3, Monte Carlo for larger k.
TrueTheta true_theta(const ModelSpec& model);

/// Monte Carlo estimate of the same quantity from `samples` draws of one row per group.
TrueTheta true_theta_monte_carlo(const ModelSpec& model, std::size_t samples, std::uint64_t seed);

std::string describe(const GroupModel& model);

}  // namespace ujel
