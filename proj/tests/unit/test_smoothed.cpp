#include "oracles.hpp"

#include "ujel/errors.hpp"
#include "ujel/models.hpp"
#include "ujel/smoothed.hpp"
#include "ujel/ustat.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace ujel;

namespace {

MultiSampleDataset scaled(const MultiSampleDataset& d, double s) {
    std::vector<Matrix> groups = d.groups();
    for (auto& g : groups) {
        for (std::size_t i = 0; i < g.rows(); ++i) {
            for (std::size_t c = 0; c < g.cols(); ++c) g(i, c) *= s;
        }
    }
    return validate_dataset(std::move(groups));
}

}  // namespace

TEST(Silverman, TwoPointColumn) {
    const std::vector<double> col{0.0, 1.0};
    EXPECT_NEAR(sample_sd(col), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(iqr_type7(col), 0.5, 1e-15);
    EXPECT_NEAR(silverman_bandwidth(col), 0.9 * (0.5 / 1.34) * std::pow(2.0, -0.2), 1e-15);
    EXPECT_NEAR(silverman_bandwidth(col), 0.29234, 1e-5);
}

TEST(Silverman, Type7Quartiles) {
    // Quartile positions 1 + 0.25 * 9 = 3.25 and 1 + 0.75 * 9 = 7.75 on 1..10 squared.
    std::vector<double> col;
    for (int i = 10; i >= 1; --i) col.push_back(i * i);
    const double q1 = 9.0 + 0.25 * 7.0;
    const double q3 = 49.0 + 0.75 * 15.0;
    EXPECT_NEAR(iqr_type7(col), q3 - q1, 1e-12);
}

TEST(Silverman, ScaleEquivariant) {
    const std::vector<double> col{0.3, -1.2, 4.5, 2.25, 0.0, 7.0, 1.5};
    std::vector<double> big;
    for (double x : col) big.push_back(8.0 * x);
    EXPECT_NEAR(silverman_bandwidth(big), 8.0 * silverman_bandwidth(col), 1e-13);
}

TEST(Silverman, ZeroSpread) {
    const std::vector<double> constant{2.0, 2.0, 2.0};
    try {
        silverman_bandwidth(constant);
        FAIL();
    } catch (const NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("zero-spread column"), std::string::npos);
    }
    // iqr = 0 but sd > 0 falls back to sd.
    const std::vector<double> spike{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 10.0};
    EXPECT_NEAR(silverman_bandwidth(spike), 0.9 * sample_sd(spike) * std::pow(8.0, -0.2), 1e-14);
    EXPECT_THROW(silverman_bandwidth(std::vector<double>{1.0}), InputError);
}

TEST(Silverman, PerColumnSampleSize) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{5, 9, 14}, 2, 12);
    const auto bw = silverman_bandwidths(d);
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t g = 0; g < 3; ++g) {
            const auto col = d.group(g).column_values(c);
            EXPECT_DOUBLE_EQ(bw.at(c, g), silverman_bandwidth(col));
        }
    }
    EXPECT_THROW(silverman_bandwidths(oracle::random_dataset(std::vector<std::size_t>{5, 5, 5}, 1, 1)),
                 InputError);
}

TEST(SmoothedTheta, SeparableMatchesTripleSum) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::vector<std::size_t> sizes{3 + seed % 5, 3 + seed % 3, 3 + seed % 7};
        const auto d = oracle::random_dataset(sizes, 2, seed);
        const auto bw = silverman_bandwidths(d);
        EXPECT_NEAR(smoothed_theta(d, bw), oracle::smoothed_theta_direct(d, bw), 1e-10);
        const auto wide = bw.scaled(3.0);
        EXPECT_NEAR(smoothed_theta(d, wide), oracle::smoothed_theta_direct(d, wide), 1e-10);
    }
}

TEST(SmoothedTheta, SingleObservationSymmetry) {
    std::vector<Matrix> g(3, Matrix::from_rows({{0.0, 0.0}}));
    const auto d = validate_dataset(g);
    BandwidthSet bw;
    bw.h.fill(1.0);
    EXPECT_EQ(smoothed_theta(d, bw), 0.0);
}

TEST(SmoothedTheta, IdenticalCoordinatesCancel) {
    std::vector<Matrix> groups;
    RandomStream rng(4, 0);
    for (std::size_t g = 0; g < 3; ++g) {
        Matrix m(6, 2);
        for (std::size_t i = 0; i < 6; ++i) m(i, 0) = m(i, 1) = rng.uniform() + 0.3 * g;
        groups.push_back(m);
    }
    const auto d = validate_dataset(groups);
    EXPECT_EQ(smoothed_theta(d, silverman_bandwidths(d)), 0.0);
}

TEST(SmoothedTheta, StrictlyInsideUnitInterval) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto d = oracle::random_dataset(std::vector<std::size_t>{6, 7, 8}, 2, seed, 10.0);
        const double t = smoothed_theta(d, silverman_bandwidths(d));
        EXPECT_GT(t, -1.0);
        EXPECT_LT(t, 1.0);
    }
}

TEST(SmoothedTheta, VanishingBandwidthRecoversU) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto d = oracle::random_dataset(std::vector<std::size_t>{8, 10, 12}, 2, seed);
        const double u = u_statistic(d, builtin_kernel("vus-diff", 3));
        EXPECT_NEAR(smoothed_theta(d, silverman_bandwidths(d).scaled(1e-6)), u, 1e-3);
    }
}

TEST(SmoothedTheta, ScaleInvariantWithRecomputedBandwidths) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{8, 9, 10}, 2, 5);
    const auto big = scaled(d, 25.0);
    EXPECT_NEAR(smoothed_theta(big, silverman_bandwidths(big)),
                smoothed_theta(d, silverman_bandwidths(d)), 1e-12);
}

TEST(SmoothedTheta, RejectsWrongShape) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{3, 3, 3}, 1, 5);
    BandwidthSet bw;
    bw.h.fill(1.0);
    EXPECT_THROW(smoothed_theta(d, bw), InputError);
    const auto d2 = oracle::random_dataset(std::vector<std::size_t>{3, 3, 3}, 2, 5);
    bw.h[2] = 0.0;
    EXPECT_THROW(smoothed_theta(d2, bw), InputError);
}

TEST(Percentile, Positions) {
    EXPECT_EQ(percentile_positions(100, 0.95), (std::array<std::size_t, 2>{3, 98}));
    EXPECT_EQ(percentile_positions(1000, 0.95), (std::array<std::size_t, 2>{25, 975}));
    EXPECT_EQ(percentile_positions(2, 0.95), (std::array<std::size_t, 2>{1, 2}));
    EXPECT_THROW(percentile_positions(1, 0.95), InputError);
}

TEST(Percentile, OrderStatistics) {
    std::vector<double> reps;
    for (int i = 100; i >= 1; --i) reps.push_back(i / 100.0);
    const auto ci = percentile_interval(reps, 0.95);
    EXPECT_DOUBLE_EQ(ci.lower, 0.03);
    EXPECT_DOUBLE_EQ(ci.upper, 0.98);
    const std::vector<double> flat(50, 0.125);
    const auto zero = percentile_interval(flat, 0.9);
    EXPECT_EQ(zero.length(), 0.0);
}

TEST(Bootstrap, DeterministicAndWorkerIndependent) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{12, 12, 12}, 2, 8);
    const auto a = bootstrap_percentile_ci(d, 0.95, 100, 42);
    const auto b = bootstrap_percentile_ci(d, 0.95, 100, 42);
    BootstrapOptions par;
    par.workers = 4;
    const auto c = bootstrap_percentile_ci(d, 0.95, 100, 42, par);
    EXPECT_EQ(a.replicates, b.replicates);
    EXPECT_EQ(a.replicates, c.replicates);
    EXPECT_EQ(a.interval.lower, c.interval.lower);
    EXPECT_EQ(a.interval.upper, c.interval.upper);
    EXPECT_EQ(a.B, 100u);
    EXPECT_EQ(a.seed, 42u);
    EXPECT_NE(bootstrap_percentile_ci(d, 0.95, 100, 43).replicates, a.replicates);
    EXPECT_DOUBLE_EQ(a.interval.point_estimate, smoothed_theta(d, silverman_bandwidths(d)));
}

TEST(Bootstrap, BandwidthsRecomputedPerReplicate) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{10, 10, 10}, 2, 3);
    const auto ci = bootstrap_percentile_ci(d, 0.9, 20, 7);
    ASSERT_EQ(ci.bandwidths.size(), 20u);
    EXPECT_NE(ci.bandwidths[0], ci.bandwidths[1]);
    EXPECT_NE(ci.bandwidths[0], silverman_bandwidths(d));
    RandomStream rng(7, stream_id(0, 1));
    const auto resample = bootstrap_resample(d, rng);
    EXPECT_EQ(ci.bandwidths[0], silverman_bandwidths(resample));
    EXPECT_DOUBLE_EQ(ci.replicates[0], smoothed_theta(resample, silverman_bandwidths(resample)));

    // Rescaling one group rescales the bandwidths drawn for that group.
    std::vector<Matrix> groups = d.groups();
    for (std::size_t i = 0; i < groups[1].rows(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) groups[1](i, c) *= 4.0;
    }
    const auto stretched = bootstrap_percentile_ci(validate_dataset(groups), 0.9, 20, 7);
    for (std::size_t b = 0; b < 20; ++b) {
        EXPECT_NEAR(stretched.bandwidths[b].at(0, 1), 4.0 * ci.bandwidths[b].at(0, 1), 1e-12);
        EXPECT_NEAR(stretched.bandwidths[b].at(0, 0), ci.bandwidths[b].at(0, 0), 1e-15);
    }
}

TEST(Bootstrap, ResamplePreservesGroupsAndSizes) {
    const auto d = oracle::random_dataset(std::vector<std::size_t>{4, 7, 5}, 2, 13);
    RandomStream rng(1, 2);
    const auto r = bootstrap_resample(d, rng);
    EXPECT_EQ(r.sizes(), d.sizes());
    for (std::size_t g = 0; g < 3; ++g) {
        for (std::size_t i = 0; i < r.size(g); ++i) {
            bool found = false;
            for (std::size_t j = 0; j < d.size(g); ++j) {
                found = found || (r.group(g)(i, 0) == d.group(g)(j, 0) && r.group(g)(i, 1) == d.group(g)(j, 1));
            }
            EXPECT_TRUE(found);
        }
    }
}

TEST(Bootstrap, ZeroSpreadResamplesAreRetriedThenFail) {
    // Two-point groups resample to a constant column with probability 1/2 per column.
    std::vector<Matrix> g{Matrix::from_rows({{0, 1}, {1, 0}}), Matrix::from_rows({{2, 3}, {3, 2}}),
                          Matrix::from_rows({{4, 5}, {5, 4}})};
    const auto d = validate_dataset(g);
    EXPECT_THROW(bootstrap_percentile_ci(d, 0.95, 200, 1), NumericError);
    const auto ok = oracle::random_dataset(std::vector<std::size_t>{3, 3, 3}, 2, 2);
    const auto ci = bootstrap_percentile_ci(ok, 0.95, 50, 5);
    EXPECT_GT(ci.retries, 0u);
    EXPECT_EQ(ci.replicates.size(), 50u);
}

TEST(Bootstrap, SymmetricModelCoverageOrder) {
    // Percentile intervals should cover theta = 0 at roughly the nominal rate.
    const ModelSpec model{{MobveParams{1, 1, 1}, MobveParams{1, 1, 1}, MobveParams{1, 1, 1}}};
    int covered = 0;
    const int reps = 60;
    for (int r = 0; r < reps; ++r) {
        RandomStream rng(99, stream_id(r, 0));
        const auto d = simulate_dataset(model, std::vector<std::size_t>{30, 30, 30}, rng);
        BootstrapOptions opts;
        opts.replicate = static_cast<std::uint64_t>(r);
        if (bootstrap_percentile_ci(d, 0.95, 100, 99, opts).interval.contains(0.0)) ++covered;
    }
    EXPECT_GE(covered, 50);
}
