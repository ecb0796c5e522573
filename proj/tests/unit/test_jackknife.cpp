#include "oracles.hpp"

#include "ujel/errors.hpp"
#include "ujel/jackknife.hpp"
#include "ujel/models.hpp"
#include "ujel/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace ujel;

namespace {

MultiSampleDataset columns(std::vector<std::vector<double>> groups) {
    std::vector<Matrix> ms;
    for (auto& g : groups) ms.push_back(Matrix::column(g));
    return validate_dataset(std::move(ms));
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST(GroupPseudoValues, HandExample) {
    const auto d = columns({{1, 4}, {2, 5}, {3, 6}});
    const auto k = builtin_kernel("vus", 3);
    const auto pv = group_pseudo_values(leave_one_out(d, k), d, k);
    EXPECT_DOUBLE_EQ(pv[0][0], 0.75);
}

TEST(GroupPseudoValues, ConstantKernelGivesConstant) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{4, 5, 6}, 1, 2);
    const auto k = constant_kernel(-1.5, {1, 1, 1});
    for (const auto& g : group_pseudo_values(leave_one_out(d, k), d, k)) {
        for (double v : g) EXPECT_NEAR(v, -1.5, 1e-14);
    }
    // Combined pseudo-values have mean theta c_l, so a constant kernel gives theta c_l exactly.
    const auto pv = pseudo_values(d, k);
    for (std::size_t l = 0; l < pv.n(); ++l) EXPECT_NEAR(pv.combined[l], -1.5 * pv.ev_coefficients[l], 1e-13);
}

TEST(GroupPseudoValues, MismatchedResultRejected) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{4, 5, 6}, 2, 2);
    const auto other = oracle::random_dataset(std::vector<std::size_t>{4, 4, 6}, 2, 2);
    const auto k = builtin_kernel("vus-diff", 3);
    EXPECT_THROW(group_pseudo_values(leave_one_out(other, k), d, k), InputError);
}

TEST(CombinedPseudoValues, IdentityMatchesPooledDeletion) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        RandomStream rng(seed, 5);
        std::vector<std::size_t> sizes;
        for (int g = 0; g < 3; ++g) sizes.push_back(2 + rng.below(6));
        const auto d = (seed % 2) ? oracle::random_dataset(sizes, 2, seed)
                                  : oracle::random_tied_dataset(sizes, 2, seed);
        const auto k = builtin_kernel("vus-diff", 3);
        const auto fast = pseudo_values(d, k, EvalPath::Counting);
        const auto ref = oracle::pooled_pseudo_values(d, k);
        ASSERT_EQ(fast.combined.size(), ref.size());
        for (std::size_t l = 0; l < ref.size(); ++l) EXPECT_NEAR(fast.combined[l], ref[l], 1e-10);
    }
}

TEST(CombinedPseudoValues, IdentityHoldsForHigherDegrees) {
    const KernelSpec k("spread-order", {2, 1}, [](std::span<const RowView> r) {
        return std::fabs(r[0][0] - r[1][0]) * (std::max(r[0][0], r[1][0]) < r[2][0] ? 1.0 : 0.0);
    });
    const auto d = oracle::random_dataset(std::vector<std::size_t>{5, 4}, 1, 17);
    const auto fast = pseudo_values(d, k, EvalPath::Oracle);
    const auto ref = oracle::pooled_pseudo_values(d, k);
    for (std::size_t l = 0; l < ref.size(); ++l) EXPECT_NEAR(fast.combined[l], ref[l], 1e-10);
}

TEST(PseudoValueSet, MeansEqualU) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto d = oracle::random_dataset(std::vector<std::size_t>{5 + seed % 4, 9, 3 + seed % 7}, 2, seed);
        const auto pv = pseudo_values(d, builtin_kernel("vus-diff", 3));
        EXPECT_NEAR(mean(pv.combined), pv.u_value, 1e-10);
        for (const auto& g : pv.group_pseudo) EXPECT_NEAR(mean(g), pv.u_value, 1e-10);
        EXPECT_NEAR(mean(pv.ev_coefficients), 1.0, 1e-12);
    }
}

TEST(EvCoefficients, EqualSizesGiveOne) {
    const std::size_t sizes[] = {10, 10, 10};
    const std::size_t degrees[] = {1, 1, 1};
    for (double c : ev_coefficients(sizes, degrees)) EXPECT_EQ(c, 1.0);
    const std::size_t sizes4[] = {7, 7, 7, 7};
    const std::size_t degrees4[] = {2, 2, 2, 2};
    for (double c : ev_coefficients(sizes4, degrees4)) EXPECT_EQ(c, 1.0);
}

TEST(EvCoefficients, UnequalSizesExactValues) {
    // c_g = n/(n-m) [n - m - (n-1)(n_g - m_g)/n_g] with n = 18, m = 3.
    const std::size_t sizes[] = {4, 6, 8};
    const std::size_t degrees[] = {1, 1, 1};
    const auto c = ev_coefficients(sizes, degrees);
    EXPECT_NEAR(c[0], 18.0 / 15.0 * (15.0 - 17.0 * 3.0 / 4.0), 1e-14);
    EXPECT_NEAR(c[4], 18.0 / 15.0 * (15.0 - 17.0 * 5.0 / 6.0), 1e-14);
    EXPECT_NEAR(c[10], 18.0 / 15.0 * (15.0 - 17.0 * 7.0 / 8.0), 1e-14);
    EXPECT_NEAR(std::accumulate(c.begin(), c.end(), 0.0) / 18.0, 1.0, 1e-12);
}

TEST(EvCoefficients, MonteCarloExpectationMatches) {
    // E[V_l] / theta for n = (4,6,8) on a model with theta = -1/6.
    const ModelSpec model{{MobveParams{1, 2, 0}, MobveParams{1, 1, 0}, MobveParams{2, 1, 0}}};
    const std::vector<std::size_t> sizes{4, 6, 8};
    const auto c = ev_coefficients(sizes, std::vector<std::size_t>{1, 1, 1});
    const auto k = builtin_kernel("vus-diff", 3);
    const int reps = 20000;
    std::vector<double> sum(3, 0.0), sum_sq(3, 0.0);
    for (int r = 0; r < reps; ++r) {
        RandomStream rng(404, stream_id(r, 0));
        const auto pv = pseudo_values(simulate_dataset(model, sizes, rng), k, EvalPath::Counting);
        for (std::size_t g = 0; g < 3; ++g) {
            const double v = pv.combined[g == 0 ? 0 : (g == 1 ? 4 : 10)];
            sum[g] += v;
            sum_sq[g] += v * v;
        }
    }
    const double theta = -1.0 / 6.0;
    const std::size_t idx[] = {0, 4, 10};
    for (std::size_t g = 0; g < 3; ++g) {
        const double m = sum[g] / reps;
        const double se = std::sqrt((sum_sq[g] / reps - m * m) / (reps - 1));
        EXPECT_NEAR(m, theta * c[idx[g]], 3.5 * se) << "group " << g;
    }
}

TEST(EvCoefficients, InvalidSizes) {
    const std::size_t sizes[] = {1, 3, 3};
    const std::size_t degrees[] = {1, 1, 1};
    EXPECT_THROW(ev_coefficients(sizes, degrees), InputError);
    const std::size_t s2[] = {2, 2};
    const std::size_t d2[] = {2, 2};
    EXPECT_THROW(ev_coefficients(s2, d2), InputError);
}

TEST(JackknifeVariance, ConstantKernelIsZero) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{4, 5, 6}, 1, 2);
    const auto pv = pseudo_values(d, constant_kernel(3.0, {1, 1, 1}));
    const auto var = jackknife_variance(pv);
    EXPECT_NEAR(var.sigma_hat_sq, 0.0, 1e-24);
}

TEST(JackknifeVariance, ScalesQuadratically) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{8, 9, 10}, 2, 4);
    const auto k = builtin_kernel("vus-diff", 3);
    const auto a = jackknife_variance(pseudo_values(d, k));
    const auto b = jackknife_variance(pseudo_values(d, k.scaled(2.0)));
    EXPECT_NEAR(b.sigma_hat_sq, 4.0 * a.sigma_hat_sq, 1e-14);
    ASSERT_EQ(a.per_group_terms.size(), 3u);
    double total = 0.0;
    for (double t : a.per_group_terms) {
        EXPECT_GE(t, 0.0);
        total += t;
    }
    EXPECT_DOUBLE_EQ(total, a.sigma_hat_sq);
}

TEST(JackknifeVariance, DirectFormula) {
    const auto d = columns({{1, 4, 2.5}, {2, 5, 0.5}, {3, 6, 4.5}});
    const auto k = builtin_kernel("vus", 3);
    const auto gp = group_pseudo_values(leave_one_out(d, k), d, k);
    double expected = 0.0;
    for (const auto& g : gp) {
        const double m = mean(g);
        double ss = 0.0;
        for (double v : g) ss += (v - m) * (v - m);
        expected += ss / (3.0 * 2.0);
    }
    EXPECT_NEAR(jackknife_variance(gp, 0.0, d.sizes()).sigma_hat_sq, expected, 1e-15);
}

TEST(JackknifeVariance, InvariantUnderWithinGroupPermutation) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{6, 7, 8}, 2, 21);
    auto groups = d.groups();
    Matrix rev(groups[2].rows(), 2);
    for (std::size_t i = 0; i < rev.rows(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) rev(i, c) = groups[2](rev.rows() - 1 - i, c);
    }
    groups[2] = rev;
    const auto k = builtin_kernel("vus-diff", 3);
    EXPECT_NEAR(jackknife_variance(pseudo_values(d, k)).sigma_hat_sq,
                jackknife_variance(pseudo_values(validate_dataset(groups), k)).sigma_hat_sq, 1e-15);
}

TEST(JackknifeVariance, NeedsTwoPerGroup) {
    std::vector<std::vector<double>> gp{{1.0}, {1.0, 2.0}};
    const std::size_t sizes[] = {1, 2};
    EXPECT_THROW(jackknife_variance(gp, 0.0, sizes), InputError);
}

TEST(JackknifeVariance, SnSquaredTracksScaledVariance) {
    // n sigma_hat^2 and S_n^2 at the true theta agree on average for the symmetric model.
    const ModelSpec model{{MobveParams{1, 1, 1}, MobveParams{1, 1, 1}, MobveParams{1, 1, 1}}};
    const std::vector<std::size_t> sizes{50, 50, 50};
    const auto k = builtin_kernel("vus-diff", 3);
    double n_sigma = 0.0;
    double sn = 0.0;
    for (int r = 0; r < 200; ++r) {
        RandomStream rng(77, stream_id(r, 0));
        const auto pv = pseudo_values(simulate_dataset(model, sizes, rng), k, EvalPath::Counting);
        const auto var = jackknife_variance(pv, 0.0);
        n_sigma += 150.0 * var.sigma_hat_sq;
        sn += *var.s_n_sq;
    }
    EXPECT_NEAR(n_sigma / sn, 1.0, 0.15);
}
