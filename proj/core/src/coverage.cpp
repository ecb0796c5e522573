#include "ujel/coverage.hpp"

#include "ujel/errors.hpp"
#include "ujel/jackknife.hpp"
#include "ujel/jel.hpp"
#include "ujel/kernel.hpp"
#include "ujel/normal_ci.hpp"
#include "ujel/parallel.hpp"
#include "ujel/rng.hpp"
#include "ujel/smoothed.hpp"
#include "ujel/summation.hpp"

#include <chrono>
#include <optional>

namespace ujel {

namespace {

KernelSpec difference_kernel(std::size_t k) {
    return builtin_kernel(k == 3 ? "vus-diff" : "hum-diff", k);
}

}  // namespace

ConfidenceInterval interval_for(CiMethod method, const MultiSampleDataset& data, double level,
                                std::size_t boot_B, std::uint64_t seed, std::uint64_t replicate) {
    if (method == CiMethod::KernelBootstrap) {
        BootstrapOptions opts;
        opts.replicate = replicate;
        return bootstrap_percentile_ci(data, level, boot_B, seed, opts).interval;
    }
    const KernelSpec kernel = difference_kernel(data.k());
    const PseudoValueSet pv = pseudo_values(data, kernel, EvalPath::Counting);
    if (method == CiMethod::Jel) return jel_confidence_interval(pv, level);
    return normal_ci(pv.u_value, jackknife_variance(pv), level).interval;
}

std::vector<CoverageReport> run_coverage(const Scenario& scenario, std::span<const CiMethod> methods,
                                         const CoverageOptions& options) {
    if (options.reps < 1) throw InputError("reps must be at least 1");
    if (methods.empty()) throw InputError("no interval methods requested");
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw InputError("confidence level must lie in (0,1)");
    }
    scenario.model.validate();
    for (CiMethod m : methods) {
        if (m == CiMethod::KernelBootstrap && scenario.model.k() != 3) {
            throw InputError("scenario '" + scenario.id +
                             "': kernel-boot is defined for three groups only");
        }
    }
    if (scenario.sizes.size() != scenario.model.k()) {
        throw InputError("scenario '" + scenario.id + "': model has " +
                         std::to_string(scenario.model.k()) + " groups but " +
                         std::to_string(scenario.sizes.size()) + " sizes");
    }
    const auto start = std::chrono::steady_clock::now();
    const TrueTheta truth = true_theta(scenario.model);

    // slot[r][m] is empty when the replicate failed for that method.
    std::vector<std::vector<std::optional<ConfidenceInterval>>> slot(
        options.reps, std::vector<std::optional<ConfidenceInterval>>(methods.size()));
    parallel_for(options.reps, options.workers, [&](std::size_t r) {
        RandomStream rng(options.seed, stream_id(r, 0));
        const MultiSampleDataset data = simulate_dataset(scenario.model, scenario.sizes, rng);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            try {
                slot[r][m] = interval_for(methods[m], data, options.level, options.boot_B,
                                          options.seed, r);
            } catch (const NumericError&) {
                slot[r][m].reset();
            }
        }
    });
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::vector<CoverageReport> out;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        CoverageReport rep;
        rep.scenario_id = scenario.id;
        rep.row_key = scenario.row_key;
        rep.size_key = scenario.size_key;
        rep.method = methods[m];
        rep.reps = options.reps;
        rep.true_theta = truth.value;
        rep.true_theta_error = truth.error;
        rep.wall_time = elapsed;
        KahanSum length;
        for (std::size_t r = 0; r < options.reps; ++r) {
            const auto& ci = slot[r][m];
            if (!ci) {
                ++rep.failures;
                continue;
            }
            if (ci->contains(truth.value)) ++rep.covered;
            if (!ci->diagnostics.warnings.empty()) ++rep.flagged;
            length.add(ci->length());
        }
        rep.coverage_probability =
            static_cast<double>(rep.covered) / static_cast<double>(options.reps);
        const std::size_t built = options.reps - rep.failures;
        rep.average_length = built > 0 ? length.value() / static_cast<double>(built) : 0.0;
        out.push_back(rep);
    }
    return out;
}

CoverageReport run_coverage(const Scenario& scenario, CiMethod method, const CoverageOptions& options) {
    const CiMethod methods[] = {method};
    return run_coverage(scenario, methods, options).front();
}

}  // namespace ujel
