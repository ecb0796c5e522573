#include "ujel/commands.hpp"
#include "ujel/errors.hpp"
#include "ujel/kernel.hpp"
#include "ujel/version.hpp"

#ifdef UJEL_SINGLE_HEADER_CLI11
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::string builtin_list() {
    std::string out;
    for (const auto& name : ujel::builtin_kernel_names()) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jackknife empirical likelihood intervals for k-sample U-statistics"};
    app.set_version_flag("--version", std::string(ujel::kVersion));
    app.require_subcommand(1);

    ujel::RunConfig cfg;
    std::vector<std::string> methods;
    std::string format = "text";
    std::string path = "auto";
    std::string order;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (UJEL_SEED overrides the default)");
        sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "text, json or csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
    };
    auto add_data = [&](CLI::App* sub) {
        sub->add_option("inputs", cfg.inputs, "one CSV per group, or one CSV with --group-column")
            ->required();
        sub->add_option("--kernel", cfg.kernel, "kernel name (" + builtin_list() + ")");
        sub->add_option("--group-column", cfg.group_column, "column holding group labels");
        sub->add_option("--order", order, "comma-separated group labels, e.g. CN,LMCI,AD");
        sub->add_option("--path", path, "evaluation path: auto, oracle or counting")
            ->check(CLI::IsMember({"auto", "oracle", "counting"}));
    };

    CLI::App* estimate = app.add_subcommand("estimate", "U-statistic and jackknife standard error");
    add_data(estimate);
    add_common(estimate);

    CLI::App* ci = app.add_subcommand("ci", "confidence intervals");
    add_data(ci);
    add_common(ci);
    ci->add_option("--method", methods, "jel, normal, kernel-boot (repeatable)")
        ->check(CLI::IsMember({"jel", "normal", "kernel-boot"}))
        ->delimiter(',');
    ci->add_option("--level", cfg.levels, "confidence level(s) in (0,1)")->delimiter(',');
    ci->add_option("--boot-B", cfg.boot_B, "bootstrap replicates")->check(CLI::Range(2, 1 << 23));

    CLI::App* simulate = app.add_subcommand("simulate", "coverage study from a scenario file");
    add_common(simulate);
    simulate->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
    simulate->add_option("--method", methods, "jel, normal, kernel-boot (repeatable)")
        ->check(CLI::IsMember({"jel", "normal", "kernel-boot"}))
        ->delimiter(',');
    simulate->add_option("--level", cfg.levels, "confidence level");
    simulate->add_option("--boot-B", cfg.boot_B, "bootstrap replicates")->check(CLI::Range(2, 1 << 23));
    simulate->add_option("--reps", cfg.reps, "replications")->check(CLI::PositiveNumber);
    simulate->add_flag("--timing", cfg.timing, "include wall times in the report");

    CLI::App* selftest = app.add_subcommand("selftest", "internal consistency checks");
    selftest->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    for (const auto& m : methods) cfg.methods.push_back(*ujel::parse_ci_method(m));
    cfg.format = *ujel::parse_output_format(format);
    cfg.path = path == "oracle" ? ujel::EvalPath::Oracle
               : path == "counting" ? ujel::EvalPath::Counting
                                    : ujel::EvalPath::Auto;
    if (!order.empty()) {
        std::size_t start = 0;
        for (;;) {
            const auto comma = order.find(',', start);
            cfg.order.push_back(order.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    if (seed) {
        cfg.seed = seed;
    } else if (const char* env = std::getenv("UJEL_SEED")) {
        std::uint64_t v = 0;
        const std::string s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            std::cerr << "error: UJEL_SEED must be an unsigned integer, got '" << s << "'\n";
            return 2;
        }
        cfg.seed = v;
    }

    return ujel::run_command(cfg, std::cout, std::cerr);
}
