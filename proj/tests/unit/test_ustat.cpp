#include "oracles.hpp"

#include "ujel/errors.hpp"
#include "ujel/models.hpp"
#include "ujel/rng.hpp"
#include "ujel/ustat.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace ujel;

namespace {

MultiSampleDataset columns(std::vector<std::vector<double>> groups) {
    std::vector<Matrix> ms;
    for (auto& g : groups) ms.push_back(Matrix::column(g));
    return validate_dataset(std::move(ms));
}

void expect_paths_agree(const MultiSampleDataset& data, const KernelSpec& kernel) {
    const UStatResult fast = leave_one_out(data, kernel, EvalPath::Counting);
    const UStatResult slow = leave_one_out(data, kernel, EvalPath::Oracle);
    const double brute = oracle::u_statistic(data, kernel);
    ASSERT_EQ(fast.leave_one_out.size(), data.total_size());
    EXPECT_NEAR(fast.value, slow.value, 1e-12);
    EXPECT_NEAR(fast.value, brute, 1e-12);
    for (std::size_t l = 0; l < data.total_size(); ++l) {
        const double ref = oracle::leave_one_out(data, kernel, l);
        EXPECT_NEAR(fast.leave_one_out[l], ref, 1e-12) << "l=" << l;
        EXPECT_NEAR(slow.leave_one_out[l], ref, 1e-12) << "l=" << l;
    }
}

}  // namespace

TEST(UStatistic, SingleCombination) {
    const auto d = columns({{1}, {2}, {3}});
    const auto k = builtin_kernel("vus", 3);
    EXPECT_EQ(u_statistic(d, k, EvalPath::Oracle), 1.0);
    EXPECT_EQ(u_statistic(d, k, EvalPath::Counting), 1.0);
}

TEST(UStatistic, TwoPerGroupHandCount) {
    const auto d = columns({{1, 4}, {2, 5}, {3, 6}});
    const auto k = builtin_kernel("vus", 3);
    EXPECT_DOUBLE_EQ(u_statistic(d, k, EvalPath::Oracle), 0.5);
    EXPECT_DOUBLE_EQ(u_statistic(d, k, EvalPath::Counting), 0.5);
    for (auto path : {EvalPath::Oracle, EvalPath::Counting}) {
        const auto r = leave_one_out(d, k, path);
        EXPECT_DOUBLE_EQ(r.leave_one_out[0], 0.25);
    }
}

TEST(UStatistic, IidGroupsGiveOneSixth) {
    std::vector<std::vector<double>> groups(3);
    RandomStream rng(11, 0);
    for (auto& g : groups) {
        for (int i = 0; i < 2000; ++i) g.push_back(rng.uniform());
    }
    const double u = u_statistic(columns(groups), builtin_kernel("vus", 3), EvalPath::Counting);
    EXPECT_NEAR(u, 1.0 / 6.0, 0.02);
}

TEST(LeaveOneOut, ConstantKernel) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{4, 5, 3}, 2, 3);
    for (auto degrees : {std::vector<std::size_t>{1, 1, 1}, std::vector<std::size_t>{2, 1, 2}}) {
        const auto k = constant_kernel(0.7, degrees);
        const auto r = leave_one_out(d, k, EvalPath::Oracle);
        for (double v : r.leave_one_out) EXPECT_NEAR(v, 0.7, 1e-15);
    }
    const auto r = leave_one_out(d, constant_kernel(0.7, {1, 1, 1}), EvalPath::Counting);
    EXPECT_NEAR(r.value, 0.7, 1e-15);
    for (double v : r.leave_one_out) EXPECT_NEAR(v, 0.7, 1e-15);
}

TEST(LeaveOneOut, IdenticalCoordinatesCancel) {
    std::vector<Matrix> g;
    for (double base : {0.0, 1.0, 2.0}) g.push_back(Matrix::from_rows({{base, base}, {base + 0.5, base + 0.5}}));
    const auto d = validate_dataset(std::move(g));
    const auto r = leave_one_out(d, builtin_kernel("vus-diff", 3), EvalPath::Counting);
    for (double v : r.leave_one_out) EXPECT_EQ(v, 0.0);
}

TEST(LeaveOneOut, DeletionMustLeaveAValidSample) {
    const auto d = columns({{1}, {2, 3}, {4, 5}});
    EXPECT_THROW(leave_one_out(d, builtin_kernel("vus", 3), EvalPath::Counting), InputError);
    EXPECT_THROW(leave_one_out(d, builtin_kernel("vus", 3), EvalPath::Oracle), InputError);
}

TEST(UStatistic, DegreeAboveGroupSizeRejected) {
    const KernelSpec k("pairs", {2, 1}, [](std::span<const RowView> r) { return r[0][0] * r[1][0] + r[2][0]; });
    EXPECT_THROW(u_statistic(columns({{1}, {2, 3}}), k), InputError);
}

TEST(UStatistic, CountingNeedsIndicatorForm) {
    const KernelSpec k("sum", {1, 1}, [](std::span<const RowView> r) { return r[0][0] + r[1][0]; });
    EXPECT_THROW(u_statistic(columns({{1, 2}, {2, 3}}), k, EvalPath::Counting), InputError);
}

TEST(UStatistic, AutoPathChoosesOracleOnlyForTinyInstances) {
    const auto k = builtin_kernel("vus-diff", 3);
    const auto small = oracle::random_dataset(std::vector<std::size_t>{4, 4, 4}, 2, 1);
    const auto large = oracle::random_dataset(std::vector<std::size_t>{20, 20, 20}, 2, 1);
    EXPECT_EQ(leave_one_out(small, k).stats.path, EvalPath::Oracle);
    EXPECT_EQ(leave_one_out(large, k).stats.path, EvalPath::Counting);
    EXPECT_EQ(leave_one_out(small, k).stats.kernel_calls, 64u);
    const KernelSpec generic("sum", {1, 1, 1}, [](std::span<const RowView> r) { return r[0][0]; });
    EXPECT_EQ(leave_one_out(large, generic).stats.path, EvalPath::Oracle);
}

class OracleEquivalence : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OracleEquivalence, BuiltinKernelsMatchBruteForce) {
    const std::uint64_t seed = GetParam();
    RandomStream rng(seed, 99);
    std::vector<std::size_t> sizes3;
    for (int g = 0; g < 3; ++g) sizes3.push_back(2 + rng.below(14));
    const auto continuous = oracle::random_dataset(sizes3, 2, seed);
    const auto tied = oracle::random_tied_dataset(sizes3, 2, seed);
    for (const auto* d : {&continuous, &tied}) {
        expect_paths_agree(*d, builtin_kernel("vus-diff", 3));
        expect_paths_agree(*d, builtin_kernel("hum-diff", 3));
        expect_paths_agree(*d, builtin_kernel("vus-diff", 3).scaled(-2.0).shifted(0.25));
    }
    const auto single = oracle::random_tied_dataset(sizes3, 1, seed + 1);
    expect_paths_agree(single, builtin_kernel("vus", 3));

    std::vector<std::size_t> sizes4;
    for (int g = 0; g < 4; ++g) sizes4.push_back(2 + rng.below(5));
    expect_paths_agree(oracle::random_tied_dataset(sizes4, 2, seed), builtin_kernel("hum-diff", 4));
    const std::vector<std::size_t> sizes2{2 + rng.below(14), 2 + rng.below(14)};
    expect_paths_agree(oracle::random_tied_dataset(sizes2, 1, seed), builtin_kernel("prob-order", 2));
}

INSTANTIATE_TEST_SUITE_P(RandomDatasets, OracleEquivalence, ::testing::Range<std::uint64_t>(1, 26));

TEST(UStatistic, HigherDegreeKernelMatchesBruteForce) {
    // |x1 - x2| * I(x < y): degree (2, 1), symmetric in the two group-1 arguments.
    const KernelSpec k("spread-order", {2, 1}, [](std::span<const RowView> r) {
        return std::fabs(r[0][0] - r[1][0]) * (std::max(r[0][0], r[1][0]) < r[2][0] ? 1.0 : 0.0);
    });
    const auto d = oracle::random_dataset(std::vector<std::size_t>{6, 5}, 1, 8);
    const auto r = leave_one_out(d, k, EvalPath::Oracle);
    EXPECT_NEAR(r.value, oracle::u_statistic(d, k), 1e-14);
    for (std::size_t l = 0; l < d.total_size(); ++l) {
        EXPECT_NEAR(r.leave_one_out[l], oracle::leave_one_out(d, k, l), 1e-14);
    }
}

TEST(UStatistic, PermutationWithinGroupPermutesLeaveOneOut) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{7, 6, 8}, 2, 5);
    const auto k = builtin_kernel("vus-diff", 3);
    const auto base = leave_one_out(d, k, EvalPath::Counting);

    std::vector<Matrix> groups = d.groups();
    std::vector<std::size_t> perm(groups[1].rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    Matrix shuffled(groups[1].rows(), 2);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) shuffled(i, c) = groups[1](perm[i], c);
    }
    groups[1] = shuffled;
    const auto moved = leave_one_out(validate_dataset(groups), k, EvalPath::Counting);
    EXPECT_NEAR(moved.value, base.value, 1e-15);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        EXPECT_NEAR(moved.leave_one_out[7 + i], base.leave_one_out[7 + perm[i]], 1e-15);
    }
}

TEST(UStatistic, UnbiasedUnderKnownModel) {
    // Exponential chains: P(X<Y<Z) = ab / ((a+b+c)(b+c)); here theta = 1/12 - 1/4.
    ModelSpec model{{MobveParams{1, 2, 0}, MobveParams{1, 1, 0}, MobveParams{2, 1, 0}}};
    const std::vector<std::size_t> sizes{8, 8, 8};
    const auto k = builtin_kernel("vus-diff", 3);
    double sum = 0.0;
    double sum_sq = 0.0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        RandomStream rng(31, stream_id(r, 0));
        const double u = u_statistic(simulate_dataset(model, sizes, rng), k);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum_sq / reps - mean * mean) / (reps - 1));
    EXPECT_NEAR(mean, -1.0 / 6.0, 3.0 * se);
}

TEST(UStatistic, RangeOfIndicatorKernels) {
    for (std::uint64_t s = 1; s < 20; ++s) {
        const auto d = oracle::random_tied_dataset(std::vector<std::size_t>{5, 6, 7}, 2, s);
        const double diff = u_statistic(d, builtin_kernel("vus-diff", 3));
        EXPECT_GE(diff, -1.0);
        EXPECT_LE(diff, 1.0);
    }
}
