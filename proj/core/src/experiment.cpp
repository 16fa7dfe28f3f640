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

#include <cstdio>
#include <fstream>

#include "rissc/harness.hpp"

namespace rissc {

std::string format_row(const MetricsRow& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%llu,%d,%d,%s,%d,%.10g,%.10g,%.10g,%.10g,%d",
                  static_cast<unsigned long long>(r.seed), r.interval, r.user, std::string(to_string(r.kind)).c_str(),
                  r.blocked ? 1 : 0, r.acc, r.mse, r.reward, r.sum_rate, r.rows_used);
    return buf;
}

std::uint64_t world_seed(const ExperimentSpec& spec, int seed_index)
{
    return spec.scenario.seed + static_cast<std::uint64_t>(seed_index);
}

std::vector<MetricsRow> run_seed(const ExperimentSpec& spec, int seed_index,
                                 const std::function<void(const IntervalMetrics&)>& on_interval)
{
    const ScenarioConfig cfg = spec.effective_scenario();
    const std::uint64_t seed = world_seed(spec, seed_index);
    Environment env = Environment::create(cfg, seed);
    env.frozen_channel = spec.frozen_channel;
    env.usage_control = spec.penalty_enabled;
    RandomStream agent_rng = RandomStream(seed).derive("agents");
    AgentSet agents = make_agent_set(cfg, spec.agents, agent_rng);

    const int warmup = cfg.schedule.warmup_intervals;
    const double e0 = spec.agents.epsilon_start;
    const double e1 = spec.agents.epsilon_end;
    std::vector<MetricsRow> rows;
    rows.reserve(static_cast<size_t>(spec.n_intervals * cfg.n_users));
    for (int t = 0; t < spec.n_intervals; ++t) {
        TrainingPhase phase = t < warmup ? TrainingPhase::offline : TrainingPhase::online;
        if (!spec.training)
            phase = TrainingPhase::frozen;
        const double eps = t < warmup ? e0 - (e0 - e1) * t / warmup : e1;
        const IntervalMetrics m = run_time_interval(env, agents, phase, spec.rewards_at(t), eps);
        if (on_interval)
            on_interval(m);
        for (int u = 0; u < cfg.n_users; ++u) {
            const auto& um = m.users[u];
            rows.push_back({seed, t, u, um.kind, um.blocked, um.acc, um.mse, um.reward, um.sum_rate, um.rows_used});
        }
    }
    return rows;
}

void run_experiment(const ExperimentSpec& spec, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open output file '" + path + "'");
    out << kCsvHeader << '\n';
    try {
        for (int i = 0; i < spec.n_seeds; ++i) {
            // Rows of one seed are produced in (interval, user) order.
            for (const auto& row : run_seed(spec, i))
                out << format_row(row) << '\n';
            out.flush();
        }
    } catch (const std::exception& e) {
        out << "# truncated: " << e.what() << '\n';
        out.flush();
        throw;
    }
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace rissc
