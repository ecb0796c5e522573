#include "ujel/smoothed.hpp"

#include "ujel/distributions.hpp"
#include "ujel/errors.hpp"
#include "ujel/parallel.hpp"
#include "ujel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace ujel {

namespace {

void require_vus_shape(const MultiSampleDataset& data) {
    if (data.k() != 3 || data.q() != 2) {
        throw InputError("kernel-smoothed estimator needs k=3 and q=2, got k=" +
                         std::to_string(data.k()) + ", q=" + std::to_string(data.q()));
    }
}

double type7(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// sum_j [sum_i Phi((y_j - x_i)/s1)] [sum_k Phi((z_k - y_j)/s2)]
double chain_sum(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& z, double s1, double s2) {
    KahanSum total;
    for (double yj : y) {
        KahanSum left;
        for (double xi : x) left.add(normal_cdf((yj - xi) / s1));
        KahanSum right;
        for (double zk : z) right.add(normal_cdf((zk - yj) / s2));
        total.add(left.value() * right.value());
    }
    return total.value();
}

}  // namespace

BandwidthSet BandwidthSet::scaled(double factor) const {
    BandwidthSet out = *this;
    for (double& v : out.h) v *= factor;
    return out;
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) throw InputError("standard deviation needs at least 2 values");
    const double mean = compensated_mean(xs);
    KahanSum ss;
    for (double x : xs) ss.add((x - mean) * (x - mean));
    return std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
}

double iqr_type7(std::span<const double> xs) {
    if (xs.empty()) throw InputError("interquartile range of an empty column");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return type7(sorted, 0.75) - type7(sorted, 0.25);
}

double silverman_bandwidth(std::span<const double> column) {
    if (column.size() < 2) throw InputError("bandwidth needs a column of length >= 2");
    const double sd = sample_sd(column);
    const double iqr = iqr_type7(column) / 1.34;
    double spread = std::min(sd, iqr);
    if (spread <= 0.0) spread = std::max(sd, iqr);
    if (!(spread > 0.0)) throw NumericError("zero-spread column");
    return 0.9 * spread * std::pow(static_cast<double>(column.size()), -0.2);
}

BandwidthSet silverman_bandwidths(const MultiSampleDataset& data) {
    require_vus_shape(data);
    BandwidthSet bw;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t g = 0; g < 3; ++g) {
            bw.h[c * 3 + g] = silverman_bandwidth(data.group(g).column_values(c));
        }
    }
    return bw;
}

double smoothed_theta(const MultiSampleDataset& data, const BandwidthSet& bw) {
    require_vus_shape(data);
    for (double h : bw.h) {
        if (!(h > 0.0) || !std::isfinite(h)) throw InputError("bandwidths must be positive and finite");
    }
    double per_coordinate[2];
    for (std::size_t c = 0; c < 2; ++c) {
        const double hx = bw.at(c, 0);
        const double hy = bw.at(c, 1);
        const double hz = bw.at(c, 2);
        per_coordinate[c] = chain_sum(data.group(0).column_values(c), data.group(1).column_values(c),
                                      data.group(2).column_values(c), std::hypot(hx, hy),
                                      std::hypot(hy, hz));
    }
    const double denom = static_cast<double>(data.size(0)) * static_cast<double>(data.size(1)) *
                         static_cast<double>(data.size(2));
    return (per_coordinate[0] - per_coordinate[1]) / denom;
}

MultiSampleDataset bootstrap_resample(const MultiSampleDataset& data, RandomStream& rng) {
    std::vector<Matrix> groups;
    groups.reserve(data.k());
    for (std::size_t g = 0; g < data.k(); ++g) {
        const Matrix& src = data.group(g);
        Matrix dst(src.rows(), src.cols());
        for (std::size_t i = 0; i < src.rows(); ++i) {
            const auto pick = static_cast<std::size_t>(rng.below(src.rows()));
            for (std::size_t c = 0; c < src.cols(); ++c) dst(i, c) = src(pick, c);
        }
        groups.push_back(std::move(dst));
    }
    return validate_dataset(std::move(groups));
}

std::array<std::size_t, 2> percentile_positions(std::size_t B, double level) {
    if (B < 2) throw InputError("bootstrap needs B >= 2");
    if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0,1)");
    const double alpha = 1.0 - level;
    const double b = static_cast<double>(B);
    // The small slack keeps products such as 200 * 0.025 = 5.000000000000001 from rounding up.
    auto ceil_pos = [&](double x) {
        const double c = std::ceil(x - 1e-9);
        return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(c, 1.0)), 1, B);
    };
    return {ceil_pos(b * alpha / 2.0), ceil_pos(b * (1.0 - alpha / 2.0))};
}

ConfidenceInterval percentile_interval(std::span<const double> replicates, double level) {
    const auto positions = percentile_positions(replicates.size(), level);
    std::vector<double> sorted(replicates.begin(), replicates.end());
    std::sort(sorted.begin(), sorted.end());
    ConfidenceInterval ci;
    ci.method = CiMethod::KernelBootstrap;
    ci.level = level;
    ci.lower = sorted[positions[0] - 1];
    ci.upper = sorted[positions[1] - 1];
    ci.diagnostics.iterations = replicates.size();
    return ci;
}

BootstrapCi bootstrap_percentile_ci(const MultiSampleDataset& data, double level, std::size_t B,
                                    std::uint64_t seed, const BootstrapOptions& options) {
    require_vus_shape(data);
    if (B >= (std::size_t{1} << 24) - 1) throw InputError("bootstrap B too large");
    percentile_positions(B, level);

    BootstrapCi out;
    out.B = B;
    out.seed = seed;
    out.replicates.resize(B);
    out.bandwidths.resize(B);
    std::vector<std::size_t> retries(B, 0);

    parallel_for(B, options.workers, [&](std::size_t b) {
        RandomStream rng(seed, stream_id(options.replicate, 1 + b));
        for (std::size_t attempt = 0;; ++attempt) {
            // A retry continues the same stream, so it sees a fresh resample.
            const MultiSampleDataset resample = bootstrap_resample(data, rng);
            try {
                out.bandwidths[b] = silverman_bandwidths(resample);
            } catch (const NumericError&) {
                if (attempt >= options.max_retries) {
                    throw NumericError("bootstrap replicate " + std::to_string(b + 1) +
                                       " has a zero-spread column after " +
                                       std::to_string(options.max_retries) + " retries");
                }
                ++retries[b];
                continue;
            }
            out.replicates[b] = smoothed_theta(resample, out.bandwidths[b]);
            return;
        }
    });

    for (std::size_t r : retries) out.retries += r;
    out.interval = percentile_interval(out.replicates, level);
    out.interval.point_estimate = smoothed_theta(data, silverman_bandwidths(data));
    if (out.retries > 0) {
        out.interval.diagnostics.warnings.push_back(std::to_string(out.retries) +
                                                    " zero-spread resamples redrawn");
    }
    return out;
}

}  // namespace ujel
