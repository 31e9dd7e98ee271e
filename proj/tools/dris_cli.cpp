// dris c++ library for double-RIS MIMO channel simulation and optimization
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dris/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 0;
    bool has_seed = false, has_trials = false, has_workers = false;
};

void add_common_options(CLI::App *cmd, CliOverrides &ov)
{
    cmd->add_option("--config", ov.config_path, "JSON config file layered over the defaults")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", ov.seed, "master RNG seed")->each([&ov](const std::string &) {
        ov.has_seed = true;
    });
    cmd->add_option("--trials", ov.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber)
        ->each([&ov](const std::string &) { ov.has_trials = true; });
    cmd->add_option("--out", ov.out_dir, "output directory");
    cmd->add_option("--format", ov.format, "output format: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_option("--workers", ov.workers, "worker threads for trial-level parallelism")
        ->check(CLI::PositiveNumber)
        ->each([&ov](const std::string &) { ov.has_workers = true; });
}

dris::ExperimentConfig resolve_config(dris::Experiment kind, const CliOverrides &ov)
{
    dris::ExperimentConfig cfg = dris::default_config(kind);
    if (!ov.config_path.empty())
        cfg = dris::load_config_file(ov.config_path, cfg);
    if (ov.has_seed)
        cfg.seed = ov.seed;
    if (ov.has_trials)
        cfg.trials = ov.trials;
    if (ov.has_workers)
        cfg.workers = ov.workers;
    if (!ov.out_dir.empty())
        cfg.out_dir = ov.out_dir;
    if (ov.format == "csv")
        cfg.formats = {"csv"};
    else if (ov.format == "json")
        cfg.formats = {"json"};
    else if (ov.format == "both")
        cfg.formats = {"csv", "json"};
    cfg.validate();
    return cfg;
}

int run(dris::Experiment kind, const CliOverrides &ov)
{
    const dris::ExperimentConfig cfg = resolve_config(kind, ov);
    dris::RunStats stats;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<dris::ResultTable> tables = dris::run_experiment(kind, cfg, &stats);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::vector<std::string> files =
        dris::emit_results(tables, cfg, dris::experiment_name(kind), elapsed);

    std::printf("%s: %d trials, seed %llu, %.2fs\n", dris::experiment_name(kind), cfg.trials,
                static_cast<unsigned long long>(cfg.seed), elapsed);
    for (const std::string &f : files)
        std::printf("  wrote %s\n", f.c_str());
    const long solves = stats.admm_solves.load();
    if (solves > 0)
        std::printf("  admm solves %ld, missed tolerance %ld (%.2f%%)\n", solves,
                    stats.admm_nonconverged.load(),
                    100.0 * double(stats.admm_nonconverged.load()) / double(solves));

    stats.enforce_budget(cfg); // throws NumericalError past the budget
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"double-RIS MIMO link simulator and phase-shift optimizer"};
    app.require_subcommand(1);

    struct Sub {
        dris::Experiment kind;
        CLI::App *cmd;
        CliOverrides ov;
    };
    std::vector<Sub> subs;
    subs.reserve(6);
    auto add = [&](dris::Experiment kind, const char *name, const char *help) {
        subs.push_back({kind, app.add_subcommand(name, help), {}});
    };
    add(dris::Experiment::fig4, "fig4", "channel power gain bounds vs panel size");
    add(dris::Experiment::fig5, "fig5", "ADMM and alternating-optimization convergence");
    add(dris::Experiment::fig6, "fig6", "capacity vs panel size and baselines");
    add(dris::Experiment::fig7, "fig7", "capacity vs scatterer count");
    add(dris::Experiment::fig8, "fig8", "union-bound and Monte Carlo SER vs SNR");
    add(dris::Experiment::custom, "custom", "generic sweep from a config file");
    for (Sub &sub : subs)
        add_common_options(sub.cmd, sub.ov);

    CLI11_PARSE(app, argc, argv);

    try {
        for (Sub &sub : subs)
            if (sub.cmd->parsed())
                return run(sub.kind, sub.ov);
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    } catch (const dris::ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const dris::NumericalError &e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
