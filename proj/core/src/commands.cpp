#include "ujel/commands.hpp"

#include "ujel/config.hpp"
#include "ujel/coverage.hpp"
#include "ujel/csv_io.hpp"
#include "ujel/distributions.hpp"
#include "ujel/errors.hpp"
#include "ujel/jackknife.hpp"
#include "ujel/jel.hpp"
#include "ujel/kernel.hpp"
#include "ujel/normal_ci.hpp"
#include "ujel/rng.hpp"
#include "ujel/smoothed.hpp"
#include "ujel/version.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

namespace ujel {

namespace {

constexpr double kDefaultLevel = 0.95;
constexpr std::size_t kDefaultReps = 500;
constexpr std::size_t kDefaultBootB = 100;

struct Loaded {
    IngestResult input;
    KernelSpec kernel;
    UStatResult ustat;
    PseudoValueSet pv;
    JackknifeVariance var;
};

Loaded load(const RunConfig& config) {
    if (config.inputs.empty()) throw InputError("no input files given");
    if (config.group_column && config.order.empty()) {
        throw InputError("--group-column needs an explicit --order (group order changes the estimand)");
    }
    CsvOptions opts;
    opts.group_column = config.group_column;
    opts.order = config.order;
    IngestResult input = ingest_csv(config.inputs, opts);
    if (!config.group_column) {
        for (auto& label : input.group_labels) label = std::filesystem::path(label).stem().string();
    }
    KernelSpec kernel = builtin_kernel(config.kernel, input.data.k());
    kernel.check_compatible(input.data);
    UStatResult ustat = leave_one_out(input.data, kernel, config.path);
    PseudoValueSet pv = combined_pseudo_values(ustat, input.data, kernel);
    JackknifeVariance var = jackknife_variance(pv);
    return {std::move(input), std::move(kernel), std::move(ustat), std::move(pv), std::move(var)};
}

EstimateSummary summarize(const Loaded& l) {
    EstimateSummary s;
    s.kernel = l.kernel.name();
    s.group_labels = l.input.group_labels;
    s.sizes = l.input.data.sizes();
    s.u_value = l.ustat.value;
    s.sigma_hat = l.var.sigma_hat();
    s.eval_path = std::string(to_string(l.ustat.stats.path));
    s.kernel_calls = l.ustat.stats.kernel_calls;
    s.warnings = l.ustat.stats.warnings;
    return s;
}

ReportMeta meta_for(const RunConfig& config, std::uint64_t seed, const std::string& hash) {
    return {config.subcommand, kVersion, seed, hash};
}

std::vector<CiMethod> all_methods() {
    return {CiMethod::Jel, CiMethod::NormalApprox, CiMethod::KernelBootstrap};
}

}  // namespace

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "subcommand=" << subcommand << "\n";
    for (const auto& in : inputs) os << "input=" << in << "\n";
    if (group_column) os << "group_column=" << *group_column << "\n";
    for (const auto& o : order) os << "order=" << o << "\n";
    os << "kernel=" << kernel << "\n";
    for (auto m : methods) os << "method=" << to_string(m) << "\n";
    for (double l : levels) os << "level=" << format_double(l) << "\n";
    if (boot_B) os << "boot_B=" << *boot_B << "\n";
    if (reps) os << "reps=" << *reps << "\n";
    if (seed) os << "seed=" << *seed << "\n";
    os << "format=" << static_cast<int>(format) << "\n";
    os << "path=" << to_string(path) << "\n";
    if (!scenario_path.empty()) os << "scenario=" << scenario_path << "\n";
    return os.str();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

int cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream&) {
    const Loaded l = load(config);
    write_estimate_report(out, meta_for(config, config.seed.value_or(kDefaultSeed), config.hash()),
                          summarize(l), config.format);
    return 0;
}

int cmd_ci(const RunConfig& config, std::ostream& out, std::ostream&) {
    const std::vector<CiMethod> methods = config.methods.empty() ? all_methods() : config.methods;
    const std::vector<double> levels =
        config.levels.empty() ? std::vector<double>{kDefaultLevel} : config.levels;
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) throw InputError("--level must lie in (0,1)");
    }
    const std::uint64_t seed = config.seed.value_or(kDefaultSeed);
    const std::size_t B = config.boot_B.value_or(kDefaultBootB);
    const Loaded l = load(config);
    const std::string path_name(to_string(l.ustat.stats.path));

    std::vector<ConfidenceInterval> intervals;
    for (CiMethod method : methods) {
        switch (method) {
            case CiMethod::Jel:
                for (double level : levels) {
                    ConfidenceInterval ci = jel_confidence_interval(l.pv, level);
                    ci.diagnostics.eval_path = path_name;
                    intervals.push_back(std::move(ci));
                }
                break;
            case CiMethod::NormalApprox:
                for (double level : levels) {
                    ConfidenceInterval ci = normal_ci(l.pv.u_value, l.var, level).interval;
                    ci.diagnostics.eval_path = path_name;
                    intervals.push_back(std::move(ci));
                }
                break;
            case CiMethod::KernelBootstrap: {
                if (l.kernel.name() != "vus-diff") {
                    throw InputError("kernel-boot supports only the vus-diff kernel");
                }
                BootstrapOptions opts;
                opts.workers = config.workers;
                const BootstrapCi boot = bootstrap_percentile_ci(l.input.data, levels.front(), B, seed, opts);
                // All levels share one set of replicates, so the intervals nest.
                for (double level : levels) {
                    ConfidenceInterval ci = percentile_interval(boot.replicates, level);
                    ci.point_estimate = boot.interval.point_estimate;
                    ci.diagnostics.eval_path = "bootstrap";
                    ci.diagnostics.warnings = boot.interval.diagnostics.warnings;
                    intervals.push_back(std::move(ci));
                }
                break;
            }
        }
    }
    write_ci_report(out, meta_for(config, seed, config.hash()), summarize(l), intervals, config.format);
    return 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (config.scenario_path.empty()) throw InputError("simulate needs --scenario FILE");
    const std::string text = read_text_file(config.scenario_path);
    const SimulationConfig file = parse_simulation_config(text);

    CoverageOptions opts;
    opts.reps = config.reps.value_or(file.reps.value_or(kDefaultReps));
    opts.seed = config.seed.value_or(file.seed.value_or(kDefaultSeed));
    opts.boot_B = config.boot_B.value_or(file.boot_B.value_or(kDefaultBootB));
    if (config.levels.size() > 1) throw InputError("simulate takes a single --level");
    opts.level = config.levels.empty() ? file.level.value_or(kDefaultLevel) : config.levels.front();
    opts.workers = config.workers;
    std::vector<CiMethod> methods = config.methods;
    if (methods.empty()) methods = file.methods;
    if (methods.empty()) methods = all_methods();

    std::ostringstream effective;
    effective << config.canonical() << "scenario_fnv=" << hex64(fnv1a64(text)) << "\nreps=" << opts.reps
              << "\nseed=" << opts.seed << "\nboot_B=" << opts.boot_B
              << "\nlevel=" << format_double(opts.level) << "\n";
    for (auto m : methods) effective << "method=" << to_string(m) << "\n";

    std::vector<CoverageReport> rows;
    for (const Scenario& scenario : file.expand()) {
        auto part = run_coverage(scenario, methods, opts);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    write_coverage_report(out, meta_for(config, opts.seed, hex64(fnv1a64(effective.str()))), rows,
                          opts.level, config.format, config.timing);
    return 0;
}

int cmd_selftest(const RunConfig& config, std::ostream& out, std::ostream&) {
    std::size_t failed = 0;
    auto check = [&](const std::string& name, const std::function<bool()>& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            out << "FAIL " << name << " (" << e.what() << ")\n";
            ++failed;
            return;
        }
        out << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failed;
    };

    check("philox4x32-10 known answer", [] {
        const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
        return r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    });
    check("normal quantile 0.975", [] {
        return std::fabs(normal_quantile(0.975) - 1.959963984540054) < 1e-12;
    });
    check("lambda on (-1,-1,3)", [] {
        const double d[] = {-1.0, -1.0, 3.0};
        return std::fabs(solve_lambda(d).lambda - 1.0 / 9.0) < 1e-10;
    });

    RandomStream rng(config.seed.value_or(kDefaultSeed), 0);
    std::vector<Matrix> groups;
    for (std::size_t n : {5, 6, 7}) {
        Matrix m(n, 2);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, 0) = rng.uniform();
            m(i, 1) = rng.uniform();
        }
        groups.push_back(std::move(m));
    }
    const MultiSampleDataset data = validate_dataset(std::move(groups));
    const KernelSpec kernel = builtin_kernel("vus-diff", 3);
    check("counting path matches enumeration", [&] {
        const UStatResult a = leave_one_out(data, kernel, EvalPath::Oracle);
        const UStatResult b = leave_one_out(data, kernel, EvalPath::Counting);
        if (std::fabs(a.value - b.value) > 1e-12) return false;
        for (std::size_t l = 0; l < a.leave_one_out.size(); ++l) {
            if (std::fabs(a.leave_one_out[l] - b.leave_one_out[l]) > 1e-12) return false;
        }
        return true;
    });
    const PseudoValueSet pv = pseudo_values(data, kernel, EvalPath::Counting);
    check("pseudo-value mean equals U", [&] {
        double s = 0.0;
        for (double v : pv.combined) s += v;
        return std::fabs(s / static_cast<double>(pv.n()) - pv.u_value) < 1e-10;
    });
    check("expectation coefficients average to one", [&] {
        double s = 0.0;
        for (double c : pv.ev_coefficients) s += c;
        return std::fabs(s / static_cast<double>(pv.n()) - 1.0) < 1e-12;
    });
    check("-2 log R vanishes at U", [&] {
        return std::fabs(log_jel_ratio(pv, pv.u_value).minus_2_log_r) < 1e-12;
    });
    check("JEL interval brackets U", [&] {
        const ConfidenceInterval ci = jel_confidence_interval(pv, 0.95);
        return ci.lower < pv.u_value && pv.u_value < ci.upper;
    });

    out << (failed == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failed == 0 ? 0 : 1;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.subcommand == "estimate") return cmd_estimate(config, out, err);
        if (config.subcommand == "ci") return cmd_ci(config, out, err);
        if (config.subcommand == "simulate") return cmd_simulate(config, out, err);
        if (config.subcommand == "selftest") return cmd_selftest(config, out, err);
        throw InputError("unknown subcommand '" + config.subcommand + "'");
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ujel
