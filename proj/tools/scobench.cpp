// scobench: command-line front end for the benchmark harness.
//
//   scobench validate <config.json>   check a config without running anything
//   scobench run <config.json>        execute the experiment grid
//   scobench summarize <dir>          aggregate a result directory
//
// Exit codes: 0 success, 1 invalid config or usage, 2 completed with
// recorded per-cell failures (run) or skipped corrupt records (summarize).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "sco/bench.hpp"
#include "sco/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Batch Bayesian optimization benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string result_dir;

    CLI::App* validate = app.add_subcommand("validate", "Check a JSON experiment config");
    validate->add_option("config", config_path, "path to the config file")->required();

    CLI::App* run = app.add_subcommand("run", "Execute the experiment grid in a config");
    run->add_option("config", config_path, "path to the config file")->required();

    CLI::App* summarize = app.add_subcommand("summarize", "Aggregate a result directory");
    summarize->add_option("dir", result_dir, "directory holding manifest.json and records/")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            sco::ExperimentConfig config = sco::load_config(config_path);
            std::printf("ok: %s (%s, hash %s)\n", config_path.c_str(),
                        config.experiment.c_str(), sco::config_hash(config).c_str());
            return 0;
        }
        if (run->parsed()) {
            sco::ExperimentConfig config = sco::load_config(config_path);
            sco::RunStatus status = sco::run_experiment(config);
            std::printf("%s: %d cells, %d failed -> %s\n", config.experiment.c_str(),
                        status.cells, status.failures, status.output_dir.string().c_str());
            for (const std::string& cell : status.failed_cells)
                std::fprintf(stderr, "failed %s\n", cell.c_str());
            return status.failures > 0 ? 2 : 0;
        }
        if (summarize->parsed()) {
            sco::SummarizeStatus status = sco::summarize(result_dir);
            std::printf("summarized %d records (%d skipped) -> %s/summary\n", status.records,
                        status.skipped, result_dir.c_str());
            for (const std::string& problem : status.problems)
                std::fprintf(stderr, "skipped %s\n", problem.c_str());
            return status.skipped > 0 ? 2 : 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
