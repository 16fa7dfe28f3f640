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

#ifndef RISSC_HARNESS_HPP
#define RISSC_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rissc/rl_agents.hpp"
#include "rissc/scenario.hpp"

namespace rissc {

// Configuration problems; line is 0 when the error is not tied to one line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

enum class ChannelMode { ideal, blocked, mixed50 };

std::string_view to_string(ChannelMode mode);

struct RewardRange {
    RewardKind kind = RewardKind::acc;
    int begin = 0;
    int end = 0;  // exclusive
};

struct ExperimentSpec {
    ScenarioConfig scenario;
    AgentHyper agents;
    // Per user; "ACC" alone covers the whole run.
    std::vector<std::vector<RewardRange>> reward_schedule;
    std::optional<int> ris_count_override;
    std::optional<ChannelMode> channel_mode;
    bool penalty_enabled = false;
    bool frozen_channel = false;
    bool training = true;
    int n_intervals = 500;
    int n_seeds = 1;
    std::string output = "metrics.csv";

    // Scenario after the RIS-count override and channel mode are applied.
    ScenarioConfig effective_scenario() const;
    RewardSpec rewards_at(int interval) const;
    // Throws ConfigError naming the offending key.
    void validate() const;
    // Every resolved key in config-file syntax.
    std::string describe() const;
};

// Flat "key = value" lines with dotted prefixes (scenario., schedule.,
// experiment., agents.); '#' starts a comment. Unknown keys are rejected.
ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::string& path);

// "ACC" or "ACC:0-500,MSE:500-800".
std::vector<RewardRange> parse_reward_schedule(std::string_view text, int n_intervals);

struct MetricsRow {
    std::uint64_t seed = 0;
    int interval = 0;
    int user = 0;
    RewardKind kind = RewardKind::acc;
    bool blocked = false;
    double acc = 0.0;
    double mse = 0.0;
    double reward = 0.0;
    double sum_rate = 0.0;
    int rows_used = 0;
};

inline constexpr std::string_view kCsvHeader =
    "seed,interval,user,reward_kind,blocked,acc,mse,reward,sum_rate,rows_used";

std::string format_row(const MetricsRow& row);

// World seed of seed index i is scenario.seed + i.
std::uint64_t world_seed(const ExperimentSpec& spec, int seed_index);

// One world: fresh agents, warmup intervals offline, the rest online.
// The callback, when set, sees every interval as it completes.
std::vector<MetricsRow> run_seed(const ExperimentSpec& spec, int seed_index,
                                 const std::function<void(const IntervalMetrics&)>& on_interval = {});

// All seeds to spec.output (or the given path). On failure the rows produced
// so far are written followed by a "# truncated: <reason>" line and the
// exception is rethrown.
void run_experiment(const ExperimentSpec& spec, const std::string& path);

struct OracleResult {
    std::vector<int> phases;  // per row, lexicographically first maximiser
    double value = 0.0;
    long evaluated = 0;
};

// Enumerates every phase tuple of the (at most max_rows) RIS rows on a fixed
// channel draw and returns the best sum rate of `user`.
OracleResult exhaustive_oracle(const ChannelRealization& links, const ScenarioConfig& config, int user = 0,
                               int max_rows = 2);

// The links a frozen-channel run of this world seed keeps for all intervals.
ChannelRealization frozen_channel_draw(const ScenarioConfig& config, std::uint64_t world_seed);

// Sum rate of `user` for the given per-row phases on a fixed draw.
double evaluate_sum_rate(const ChannelRealization& links, const ScenarioConfig& config,
                         const std::vector<int>& phases, int user = 0);

struct SelftestReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool passed() const;
};

// Fast property checks plus a small deterministic experiment whose metrics
// are written to metrics_path.
SelftestReport run_selftest(const std::string& metrics_path, std::ostream& log);

} // namespace rissc

#endif
