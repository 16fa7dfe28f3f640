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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "rissc/harness.hpp"
#include "rissc/rl_agents.hpp"

using namespace rissc;

namespace {

QAgent bias_only(const Eigen::VectorXd& bias, int n_in, Activation act = Activation::linear)
{
    QAgent a;
    a.net.layers.push_back({Eigen::MatrixXd::Zero(bias.size(), n_in), bias, act});
    return a;
}

ScenarioConfig small_scenario()
{
    ScenarioConfig cfg;
    cfg.n_ris = 1;
    cfg.ris_rows = 2;
    cfg.ris_positions = {{5.0, -2.0, 5.0}};
    cfg.n_subcarriers = 64;
    return cfg;
}

Experience make_experience(const AgentSet& agents, int phase_action, int bg, int ob, double mse)
{
    Experience e;
    e.phase_obs = Eigen::VectorXd::Constant(agents.phase[0].net.input_size(), 0.3);
    e.usage_obs = Eigen::VectorXd::Constant(agents.usage[0].net.input_size(), 0.3);
    e.stream_obs.push_back(Eigen::VectorXd::Constant(agents.stream[0].net.input_size(), 0.3));
    e.phase_action.assign(agents.phase.size(), phase_action);
    e.stream_action.push_back({bg, ob});
    e.usage.assign(2, 1);
    e.outcome.push_back({0.5, mse, 5.0});
    e.rows_used = 2;
    return e;
}

} // namespace

TEST_CASE("reward examples")
{
    CHECK(compute_reward(RewardKind::acc, 0.95, 0.01, 0.0, 0, false) == doctest::Approx(29.5));
    CHECK(compute_reward(RewardKind::acc, 0.80, 0.01, 0.0, 0, false) == doctest::Approx(-92.0));
    CHECK(compute_reward(RewardKind::mse, 0.0, 0.1, 0.0, 0, false) == doctest::Approx(10.0));
    const double base = compute_reward(RewardKind::rate, 0.0, 0.1, 2.5, 4, false);
    CHECK(base == doctest::Approx(2.5));
    CHECK(compute_reward(RewardKind::rate, 0.0, 0.1, 2.5, 4, true) == doctest::Approx(base - 20.0));
    CHECK(compute_reward(RewardKind::acc, 0.85, 0.01, 0.0, 0, false) == doctest::Approx(8.5 - 100.0));
    CHECK(compute_reward(RewardKind::mse, 0.0, 0.0, 0.0, 0, false) == doctest::Approx(60.0));
}

TEST_CASE("joint reward and reward kind parsing")
{
    const std::vector<double> r{10.0, -92.0};
    const std::vector<double> s{-92.0, 10.0};
    CHECK(joint_multiuser_reward(r) == doctest::Approx(-82.0));
    CHECK(joint_multiuser_reward(r) == joint_multiuser_reward(s));
    const std::vector<double> z{0.0, 7.5};
    CHECK(joint_multiuser_reward(z) == 7.5);
    CHECK(parse_reward_kind("acc") == RewardKind::acc);
    CHECK(parse_reward_kind("Rate") == RewardKind::rate);
    CHECK(to_string(RewardKind::mse) == "MSE");
    CHECK_THROWS_AS(parse_reward_kind("SSIM"), std::invalid_argument);
}

TEST_CASE("phase action selection")
{
    RandomStream rng(1);
    const auto flat = bias_only(Eigen::VectorXd::Zero(5), 3);
    std::array<int, 5> counts{};
    for (int i = 0; i < 10000; ++i)
        ++counts[act_phase(flat, Eigen::VectorXd::Zero(3), 1.0, rng).index];
    const double sigma = std::sqrt(10000 * 0.2 * 0.8);
    for (int c : counts)
        CHECK(std::abs(c - 2000) <= 3 * sigma);

    Eigen::VectorXd q(5);
    q << 0, 0, 5, 0, 0;
    CHECK(act_phase(bias_only(q, 3), Eigen::VectorXd::Zero(3), 0.0, rng).delta() == 0);
    for (int i = 0; i < 20; ++i)
        CHECK(act_phase(flat, Eigen::VectorXd::Zero(3), 0.0, rng).delta() == -3);
    CHECK_THROWS_AS(act_phase(flat, Eigen::VectorXd::Zero(3), 1.5, rng), std::invalid_argument);
}

TEST_CASE("stream and row selection")
{
    RandomStream rng(2);
    RandomStream init(3);
    QAgent s{init_network({4, 8, 2}, {Activation::relu, Activation::linear}, init), {}};
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(4, -1.0, 1.0);
    const int first = act_stream(s, x, 0.0, rng);
    for (int i = 0; i < 20; ++i)
        CHECK(act_stream(s, x, 0.0, rng) == first);

    Eigen::VectorXd logits(3);
    logits << std::log(9.0), -std::log(9.0), 0.0;
    const auto rows = act_rows(bias_only(logits, 2, Activation::sigmoid), Eigen::VectorXd::Zero(2));
    CHECK(rows == std::vector<std::uint8_t>{1, 0, 1});
    const auto all = act_rows(bias_only(Eigen::VectorXd::Zero(4), 2, Activation::sigmoid), Eigen::VectorXd::Zero(2));
    CHECK(all == std::vector<std::uint8_t>{1, 1, 1, 1});
}

TEST_CASE("phase arithmetic is a group modulo 64")
{
    for (int start = 0; start < kPhaseLevels; ++start) {
        int p = start;
        p = ((p + kPhaseDeltas[4]) % kPhaseLevels + kPhaseLevels) % kPhaseLevels;
        p = ((p + kPhaseDeltas[0]) % kPhaseLevels + kPhaseLevels) % kPhaseLevels;
        CHECK(p == start);
    }
}

TEST_CASE("observation layout")
{
    const int ch = kFeatureSubcarriers * 2 * 2 * 2;
    RisConfig ris = RisConfig::uniform(2, 4, 0);
    const std::vector<Eigen::VectorXd> channel{Eigen::VectorXd::Zero(ch)};
    const std::vector<StreamPlan> plans{StreamPlan::from_choices(1, 0)};
    const auto obs = build_observation(channel, ris, plans);
    CHECK(obs.channel[0].isZero());
    CHECK(obs.phases.size() == 16);
    for (int r = 0; r < 8; ++r) {
        CHECK(obs.phases(2 * r) == 1.0);
        CHECK(obs.phases(2 * r + 1) == 0.0);
    }
    CHECK(obs.phase_input().size() == ch + 16);
    CHECK(obs.stream_input(0).size() == ch + 16 + 4);
    CHECK(obs.usage_input().size() == ch + 16 + 8);
    CHECK(obs.full().size() == ch + 16 + 4 + 8);
    CHECK(obs.streams[0](1) == 1.0);
    CHECK(obs.streams[0](2) == 1.0);

    ris.phase(1, 2) = 32;
    const auto shifted = build_observation(channel, ris, plans);
    const Eigen::VectorXd diff = shifted.phases - obs.phases;
    int changed = 0;
    for (int i = 0; i < diff.size(); ++i)
        changed += std::abs(diff(i)) > 1e-12;
    CHECK(changed == 1);  // cos flips from 1 to -1, sin stays 0 (to rounding)
    CHECK(shifted.phases(2 * 6) == doctest::Approx(-1.0));
    CHECK(std::abs(shifted.phases(2 * 6 + 1)) < 1e-12);

    const auto again = build_observation(channel, ris, plans);
    CHECK(again.full() == shifted.full());
    const std::vector<StreamPlan> two(2);
    CHECK_THROWS_AS(build_observation(channel, ris, two), std::invalid_argument);
}

TEST_CASE("agent set composition")
{
    for (int users : {1, 2}) {
        ScenarioConfig cfg;
        cfg.n_users = users;
        RandomStream rng(4);
        const auto a = make_agent_set(cfg, AgentHyper{}, rng);
        CHECK(a.agent_count() == cfg.n_ris * cfg.ris_rows + 2 * users + cfg.n_ris);
        CHECK(a.phase[0].net.output_size() == 5);
        CHECK(a.stream[0].net.output_size() == 2);
        CHECK(a.usage[0].net.output_size() == cfg.ris_rows);
        CHECK(a.usage[0].net.layers.back().activation == Activation::sigmoid);
    }
}

TEST_CASE("replay buffer is FIFO and samples distinct indices")
{
    ReplayBuffer buf(4);
    for (int i = 0; i < 6; ++i) {
        Experience e;
        e.rows_used = i;
        buf.push(e);
    }
    CHECK(buf.size() == 4);
    CHECK(buf[0].rows_used == 2);
    CHECK(buf[3].rows_used == 5);
    RandomStream rng(5);
    for (int t = 0; t < 100; ++t) {
        auto idx = buf.sample(4, rng);
        std::sort(idx.begin(), idx.end());
        CHECK(idx == std::vector<int>{0, 1, 2, 3});
    }
    CHECK_THROWS_AS(buf.sample(5, rng), std::invalid_argument);
    CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("dqn update needs a full batch")
{
    RandomStream rng(6);
    auto agents = make_agent_set(small_scenario(), AgentHyper{}, rng);
    RewardSpec spec{{RewardKind::rate}, false};
    CHECK_THROWS_AS(dqn_update(agents, spec, rng), std::invalid_argument);
}

TEST_CASE("constant reward: taken Q values converge to the reward")
{
    RandomStream rng(7);
    auto agents = make_agent_set(small_scenario(), AgentHyper{}, rng);
    RewardSpec spec{{RewardKind::rate}, false};
    for (int i = 0; i < 40; ++i)
        agents.replay.push(make_experience(agents, i % 5, 0, 1, 0.1));
    for (int step = 0; step < 500; ++step)
        dqn_update(agents, spec, rng);
    const auto& obs = agents.replay[0].phase_obs;
    for (const auto& a : agents.phase) {
        const auto q = forward(a.net, obs);
        for (int k = 0; k < 5; ++k)
            CHECK(q(k) == doctest::Approx(5.0).epsilon(0.1 / 5.0));
    }
}

TEST_CASE("two-action bandit: the rewarded stream wins")
{
    // Background stream 0 earns MSE reward 1, stream 1 earns 0.
    RandomStream rng(8);
    auto agents = make_agent_set(small_scenario(), AgentHyper{}, rng);
    RewardSpec spec{{RewardKind::mse}, false};
    const auto probe = make_experience(agents, 2, 0, 1, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const int a = act_stream(agents.stream_agent(0, kBackground), probe.stream_obs[0], 0.1, rng);
        agents.replay.push(make_experience(agents, 2, a, 1, a == 0 ? std::pow(10.0, -0.1) : 1.0));
        if (agents.replay.size() >= 8)
            dqn_update(agents, spec, rng);
    }
    int chosen = 0;
    for (int t = 0; t < 10000; ++t)
        chosen += act_stream(agents.stream_agent(0, kBackground), probe.stream_obs[0], 0.1, rng) == 0;
    CHECK(act_stream(agents.stream_agent(0, kBackground), probe.stream_obs[0], 0.0, rng) == 0);
    // Greedy picks the rewarded arm; the epsilon policy then selects it with
    // probability 0.95, checked against a 3-sigma binomial band.
    CHECK(chosen >= 9500 - 3 * std::sqrt(10000 * 0.95 * 0.05));
}

TEST_CASE("usage agents learn to drop rows that only cost reward")
{
    // Accuracy is a fair coin that ignores the rows, so every active row is
    // a pure 5-point loss hidden under the much larger accuracy swings.
    RandomStream rng(9);
    auto agents = make_agent_set(small_scenario(), AgentHyper{}, rng);
    RewardSpec spec{{RewardKind::acc}, true};
    for (int i = 0; i < 256; ++i) {
        Experience e = make_experience(agents, 2, 0, 1, 0.05);
        e.usage_learned = true;
        e.usage = {static_cast<std::uint8_t>(rng.uniform_int(2)), static_cast<std::uint8_t>(rng.uniform_int(2))};
        e.rows_used = e.usage[0] + e.usage[1];
        e.outcome[0].acc = rng.uniform() < 0.5 ? 1.0 : 0.0;
        agents.replay.push(std::move(e));
    }
    for (int step = 0; step < 400; ++step)
        dqn_update(agents, spec, rng);
    const Eigen::VectorXd p = forward(agents.usage[0].net, agents.replay[0].usage_obs);
    CHECK(p(0) < 0.5);
    CHECK(p(1) < 0.5);
    CHECK(act_rows(agents.usage[0], agents.replay[0].usage_obs) == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("agent checkpoints round trip")
{
    const auto dir = std::filesystem::temp_directory_path() / "rissc_ckpt_test";
    std::filesystem::remove_all(dir);
    ScenarioConfig cfg;
    cfg.n_users = 2;
    RandomStream a(31), b(32);
    const auto saved = make_agent_set(cfg, AgentHyper{}, a);
    auto loaded = make_agent_set(cfg, AgentHyper{}, b);
    save_agent_set(saved, dir);

    std::ifstream manifest(dir / "manifest.txt");
    int lines = 0;
    for (std::string l; std::getline(manifest, l);)
        ++lines;
    CHECK(lines == 1 + saved.agent_count());
    CHECK(std::filesystem::exists(dir / "stream.u1.object.net"));

    load_agent_set(loaded, dir);
    for (size_t i = 0; i < saved.phase.size(); ++i)
        CHECK(loaded.phase[i].net.parameters() == saved.phase[i].net.parameters());
    for (size_t i = 0; i < saved.stream.size(); ++i)
        CHECK(loaded.stream[i].net.parameters() == saved.stream[i].net.parameters());
    for (size_t i = 0; i < saved.usage.size(); ++i)
        CHECK(loaded.usage[i].net.parameters() == saved.usage[i].net.parameters());

    cfg.n_users = 1;
    RandomStream c(33);
    auto other = make_agent_set(cfg, AgentHyper{}, c);
    CHECK_THROWS_AS(load_agent_set(other, dir), std::invalid_argument);

    // A truncated file is rejected and leaves the target untouched.
    std::filesystem::resize_file(dir / "usage.s1.net", 10);
    RandomStream d(34);
    cfg.n_users = 2;
    auto fresh = make_agent_set(cfg, AgentHyper{}, d);
    const auto before = fresh.phase[0].net.parameters();
    CHECK_THROWS(load_agent_set(fresh, dir));
    CHECK(fresh.phase[0].net.parameters() == before);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_agent_set(fresh, dir), std::runtime_error);
}

TEST_CASE("interval bookkeeping: experiences, updates and usage gating")
{
    ScenarioConfig cfg = small_scenario();
    Environment env = Environment::create(cfg, 11);
    env.usage_control = true;
    RandomStream ar(12);
    auto agents = make_agent_set(cfg, AgentHyper{}, ar);
    RewardSpec spec{{RewardKind::acc}, true};
    int frames = 0;
    for (int t = 0; t < 64; ++t) {
        const auto before = env.ris;
        const auto m = run_time_interval(env, agents, TrainingPhase::offline, spec, 1.0);
        frames += m.experiences_added;
        CHECK(m.frames_observed == 20);
        for (int r = 0; r < 2; ++r)
            if (!env.ris.row_in_use[r])
                CHECK(env.ris.phase_index[r] == before.phase_index[r]);
        CHECK(m.users[0].rows_used == env.ris.rows_in_use());
    }
    CHECK(frames == 1280);
    const auto online = run_time_interval(env, agents, TrainingPhase::online, spec, 0.05);
    CHECK(online.experiences_added == 1);
    const auto frozen = run_time_interval(env, agents, TrainingPhase::frozen, spec, 0.05);
    CHECK(frozen.experiences_added == 0);
    CHECK(frozen.updates_run == 0);
}

TEST_CASE("frozen intervals are reproducible")
{
    auto run = [] {
        ScenarioConfig cfg = small_scenario();
        Environment env = Environment::create(cfg, 21);
        RandomStream ar(22);
        auto agents = make_agent_set(cfg, AgentHyper{}, ar);
        RewardSpec spec{{RewardKind::acc}, false};
        std::vector<double> out;
        for (int t = 0; t < 5; ++t) {
            const auto m = run_time_interval(env, agents, TrainingPhase::frozen, spec, 0.3);
            out.push_back(m.users[0].acc);
            out.push_back(m.users[0].mse);
            out.push_back(m.users[0].sum_rate);
        }
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("policy improvement on a frozen channel")
{
    // Sum rate over intervals 900-1000 beats intervals 0-100 on every seed.
    ExperimentSpec spec;
    spec.scenario.n_ris = 1;
    spec.scenario.ris_rows = 2;
    spec.scenario.ris_positions = {{5.0, -2.0, 5.0}};
    spec.scenario.n_subcarriers = 256;
    spec.channel_mode = ChannelMode::blocked;
    spec.frozen_channel = true;
    spec.n_intervals = 1000;
    spec.reward_schedule = {parse_reward_schedule("RATE", spec.n_intervals)};
    for (int seed = 0; seed < 5; ++seed) {
        const auto rows = run_seed(spec, seed);
        double early = 0.0, late = 0.0;
        for (const auto& r : rows) {
            if (r.interval < 100)
                early += r.sum_rate;
            if (r.interval >= 900)
                late += r.sum_rate;
        }
        CHECK(late > early);
    }
}
