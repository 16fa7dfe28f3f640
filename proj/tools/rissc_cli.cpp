// SPDX-License-Identifier: Apache-2.0
//
// rissc: RIS-assisted semantic transmission simulator
// Copyright (C) 2026 The rissc Authors
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

// rissc command-line interface.
//   rissc run --config <path> [--seeds N] [--out <path>]
//   rissc oracle --config <path> --rows R
//   rissc selftest [--out <path>]
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rissc/harness.hpp"
#include "rissc/scenario.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_run(const std::string& config_path, int seeds, const std::string& out_path)
{
    rissc::ExperimentSpec spec = rissc::load_config(config_path);
    if (seeds > 0)
        spec.n_seeds = seeds;
    if (!out_path.empty())
        spec.output = out_path;
    spec.validate();
    std::cout << "# resolved configuration\n" << spec.describe() << std::flush;
    rissc::run_experiment(spec, spec.output);
    std::cout << "# wrote " << spec.n_seeds * spec.n_intervals * spec.scenario.n_users << " rows to "
              << spec.output << '\n';
    return 0;
}

int cmd_oracle(const std::string& config_path, int rows)
{
    rissc::ExperimentSpec spec = rissc::load_config(config_path);
    if (rows < 0 || rows > 2)
        throw rissc::ConfigError("--rows must be 0, 1 or 2");
    rissc::ScenarioConfig cfg = spec.effective_scenario();
    if (cfg.total_rows() != rows) {
        cfg.n_ris = rows > 0 ? 1 : 0;
        cfg.ris_rows = rows > 0 ? rows : cfg.ris_rows;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw rissc::ConfigError(std::string("scenario.") + e.what());
    }
    std::cout << "# resolved configuration\n" << spec.describe();
    // Same channel draw as the first interval of seed index 0.
    const auto links = rissc::frozen_channel_draw(cfg, rissc::world_seed(spec, 0));
    const auto best = rissc::exhaustive_oracle(links, cfg, 0, 2);
    std::cout << "blocked," << (links.users[0].blocked ? 1 : 0) << '\n';
    std::cout << "phases";
    for (int p : best.phases)
        std::cout << ',' << p;
    std::cout << "\nsum_rate," << best.value << "\nevaluated," << best.evaluated << '\n';
    return 0;
}

int cmd_selftest(const std::string& out_path)
{
    const auto report = rissc::run_selftest(out_path, std::cout);
    std::cout << (report.passed() ? "selftest passed" : "selftest FAILED") << '\n';
    return report.passed() ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS-assisted semantic transmission simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int seeds = 0;
    int rows = 0;

    auto* run = app.add_subcommand("run", "Run an experiment and write per-interval metrics");
    run->add_option("--config", config_path, "Configuration file")->required();
    run->add_option("--seeds", seeds, "Number of seeds (overrides experiment.n_seeds)")->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "Metrics CSV path (overrides experiment.output)");

    auto* oracle = app.add_subcommand("oracle", "Exhaustive phase search on a frozen channel draw");
    oracle->add_option("--config", config_path, "Configuration file")->required();
    oracle->add_option("--rows", rows, "Number of RIS rows to search (at most 2)")->required();

    std::string selftest_out = "selftest_metrics.csv";
    auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");
    selftest->add_option("--out", selftest_out, "Metrics file written by the selftest experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run)
            return cmd_run(config_path, seeds, out_path);
        if (*oracle)
            return cmd_oracle(config_path, rows);
        if (*selftest)
            return cmd_selftest(selftest_out);
    } catch (const rissc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
