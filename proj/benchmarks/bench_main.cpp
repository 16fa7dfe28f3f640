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

#include <benchmark/benchmark.h>

#include "rissc/harness.hpp"
#include "rissc/ris_channel.hpp"
#include "rissc/semantic_codec.hpp"

using namespace rissc;

namespace {

ChannelRealization draw(const ScenarioConfig& cfg, std::uint64_t seed)
{
    RandomStream rng(seed);
    return generate_links(step_scenario(initial_user_state(cfg), cfg, rng), cfg, rng);
}

void BM_Cascade(benchmark::State& state)
{
    ScenarioConfig cfg;
    const auto links = draw(cfg, 1);
    const auto ris = RisConfig::uniform(cfg.n_ris, cfg.ris_rows, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(cascade(links, ris, 0, cfg.n_subcarriers));
}
BENCHMARK(BM_Cascade);

void BM_SvdSubchannels(benchmark::State& state)
{
    ScenarioConfig cfg;
    const auto eff = cascade(draw(cfg, 2), RisConfig::uniform(cfg.n_ris, cfg.ris_rows, 0), 0, cfg.n_subcarriers);
    for (auto _ : state)
        benchmark::DoNotOptimize(svd_subchannels(eff.cfr));
}
BENCHMARK(BM_SvdSubchannels);

void BM_TransmitFrame(benchmark::State& state)
{
    ScenarioConfig cfg;
    const auto eff = cascade(draw(cfg, 3), RisConfig::uniform(cfg.n_ris, cfg.ris_rows, 0), 0, cfg.n_subcarriers);
    const auto svd = svd_subchannels(eff.cfr);
    RandomStream rng(4);
    const auto frame = generate_source(rng, 2);
    const auto tx = map_bits_to_streams(frame.bits, StreamPlan::from_choices(state.range(0), 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(transmit_frame(tx, svd, cfg.snr_db, rng));
}
BENCHMARK(BM_TransmitFrame)->Arg(0)->Arg(1);

void BM_TrainBatchPhaseNet(benchmark::State& state)
{
    ScenarioConfig cfg;
    RandomStream rng(5);
    AgentSet agents = make_agent_set(cfg, AgentHyper{}, rng);
    DenseNetwork& net = agents.phase[0].net;
    AdamState adam;
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Target> targets;
    for (int i = 0; i < 8; ++i) {
        inputs.push_back(Eigen::VectorXd::Random(net.input_size()));
        targets.push_back(Target{i % 5, 1.0, {}});
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(train_batch(net, inputs, targets, Loss::mse_on_selected_output, adam, 1e-3));
}
BENCHMARK(BM_TrainBatchPhaseNet);

void BM_RunTimeInterval(benchmark::State& state)
{
    ScenarioConfig cfg;
    Environment env = Environment::create(cfg, 6);
    RandomStream rng(7);
    AgentSet agents = make_agent_set(cfg, AgentHyper{}, rng);
    const RewardSpec spec{{RewardKind::acc}, false};
    for (auto _ : state)
        benchmark::DoNotOptimize(run_time_interval(env, agents, TrainingPhase::online, spec, 0.1));
}
BENCHMARK(BM_RunTimeInterval)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
