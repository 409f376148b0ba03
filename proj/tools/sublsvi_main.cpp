// Benchmark harness for the sublinear value-iteration library: generate
// linear-MDP instances, run LSVI / LSVI-UCB variants, sweep action counts
// and render text reports from the emitted CSVs.

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>

#include "sublsvi/bench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sublinear LSVI benchmark harness"};
    app.require_subcommand(1);

    sublsvi::bench::CliOptions options;
    std::string report_dir;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config = cmd->add_option("--config", options.config_path, "key=value config file");
        if (needs_config) config->required();
        cmd->add_option("--out", options.out_dir, "output directory");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { options.seed = v; }, "seed override");
        cmd->add_option_function<std::string>(
            "--variant", [&](const std::string& v) { options.variant = v; },
            "variant override");
    };

    auto* generate = app.add_subcommand("generate", "generate and serialize a linear MDP");
    add_common(generate, true);
    auto* run = app.add_subcommand("run", "run one algorithm variant on an MDP file");
    add_common(run, true);
    auto* sweep = app.add_subcommand("sweep", "paired exact/sublinear sweep over action counts");
    add_common(sweep, true);
    auto* report = app.add_subcommand("report", "render a text report from a CSV directory");
    report->add_option("--dir", report_dir, "directory of CSV files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return sublsvi::bench::cmd_generate(options);
        if (run->parsed()) return sublsvi::bench::cmd_run(options);
        if (sweep->parsed()) return sublsvi::bench::cmd_sweep(options);
        if (report->parsed()) return sublsvi::bench::cmd_report(report_dir);
    } catch (const sublsvi::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
