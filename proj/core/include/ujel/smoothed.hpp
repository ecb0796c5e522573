#pragma once

#include "ujel/dataset.hpp"
#include "ujel/interval.hpp"
#include "ujel/rng.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ujel {

/// Six bandwidths for a three-group, two-coordinate dataset, ordered
/// (coord 1: X, Y, Z, coord 2: X, Y, Z).
struct BandwidthSet {
    std::array<double, 6> h{};

    double at(std::size_t coordinate, std::size_t group) const { return h.at(coordinate * 3 + group); }
    BandwidthSet scaled(double factor) const;
    friend bool operator==(const BandwidthSet&, const BandwidthSet&) = default;
};

/// Sample standard deviation with denominator n - 1.
double sample_sd(std::span<const double> xs);

/// Interquartile range using linearly interpolated order statistics (quantile type 7).
double iqr_type7(std::span<const double> xs);

/// 0.9 min(sd, iqr/1.34) n^-0.2. When exactly one of sd and iqr/1.34 is zero the other is used;
/// both zero throws NumericError("zero-spread column").
double silverman_bandwidth(std::span<const double> column);

/// Silverman bandwidth of every column of every group. Requires k = 3 and q = 2.
BandwidthSet silverman_bandwidths(const MultiSampleDataset& data);

/// Kernel-smoothed estimate of P(X1<Y1<Z1) - P(X2<Y2<Z2) with Gaussian-CDF smoothing.
double smoothed_theta(const MultiSampleDataset& data, const BandwidthSet& bw);

struct BootstrapCi {
    std::vector<double> replicates;
    /// Bandwidths recomputed on each resample.
    std::vector<BandwidthSet> bandwidths;
    ConfidenceInterval interval;
    std::size_t B = 0;
    std::uint64_t seed = 0;
    /// Resamples redrawn because a column had zero spread.
    std::size_t retries = 0;
};

struct BootstrapOptions {
    std::size_t workers = 1;
    /// Outer replicate index; selects the RNG streams so nested use stays non-overlapping.
    std::uint64_t replicate = 0;
    std::size_t max_retries = 10;
};

/// Within-group resample with replacement, group sizes preserved.
MultiSampleDataset bootstrap_resample(const MultiSampleDataset& data, RandomStream& rng);

/// 1-based order-statistic positions ceil(B alpha/2) and ceil(B (1 - alpha/2)).
std::array<std::size_t, 2> percentile_positions(std::size_t B, double level);

/// Percentile interval of a list of bootstrap estimates.
ConfidenceInterval percentile_interval(std::span<const double> replicates, double level);

/// Percentile bootstrap interval for smoothed_theta with bandwidths recomputed per resample.
/// Replicate b draws from stream (seed, stream_id(options.replicate, 1 + b)).
BootstrapCi bootstrap_percentile_ci(const MultiSampleDataset& data, double level, std::size_t B,
                                    std::uint64_t seed, const BootstrapOptions& options = {});

}  // namespace ujel
