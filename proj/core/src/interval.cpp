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

#include <stdexcept>

#include "rissc/rl_agents.hpp"
#include "rissc/semantic_codec.hpp"

namespace rissc {

Environment Environment::create(const ScenarioConfig& config, std::uint64_t world_seed)
{
    config.validate();
    Environment env;
    env.config = config;
    const RandomStream root(world_seed);
    env.scenario_rng = root.derive("scenario");
    env.channel_rng = root.derive("channel");
    env.source_rng = root.derive("source");
    env.noise_rng = root.derive("noise");
    env.policy_rng = root.derive("policy");
    env.update_rng = root.derive("update");
    env.users.assign(static_cast<size_t>(config.n_users), initial_user_state(config));
    env.ris = RisConfig::uniform(config.n_ris, config.ris_rows, 0);
    RandomStream init = root.derive("ris_init");
    for (auto& p : env.ris.phase_index)
        p = init.uniform_int(kPhaseLevels);
    env.prev_streams.assign(static_cast<size_t>(config.n_users), StreamPlan{});
    return env;
}

IntervalMetrics run_time_interval(Environment& env, AgentSet& agents, TrainingPhase phase,
                                  const RewardSpec& spec, double epsilon)
{
    const ScenarioConfig& cfg = env.config;
    const int U = cfg.n_users;
    const int K = cfg.n_subcarriers;
    if (static_cast<int>(spec.kinds.size()) != U || agents.n_users != U)
        throw std::invalid_argument("run_time_interval: reward spec and agents must cover every user");
    if (phase == TrainingPhase::frozen)
        epsilon = 0.0;

    ++env.interval;
    if (!env.frozen_channel || !env.links_ready) {
        for (auto& u : env.users)
            u = step_scenario(u, cfg, env.scenario_rng);
        env.links = generate_links(env.users, cfg, env.channel_rng);
        env.links_ready = true;
    }

    std::vector<Eigen::VectorXd> features;
    for (int u = 0; u < U; ++u)
        features.push_back(channel_features(cascade(env.links, env.ris, u, K).cfr));
    const Observation obs = build_observation(features, env.ris, env.prev_streams);
    RandomStream& rng = env.policy_rng;

    const int R = cfg.total_rows();
    Experience proto;
    proto.phase_obs = obs.phase_input();
    proto.usage_obs = obs.usage_input();
    proto.usage_learned = env.usage_control && R > 0;
    if (proto.usage_learned) {
        const bool explore = epsilon > 0.0 && rng.uniform() < epsilon;
        for (int s = 0; s < cfg.n_ris; ++s) {
            std::vector<std::uint8_t> rows;
            if (explore) {
                rows.resize(static_cast<size_t>(cfg.ris_rows));
                for (auto& b : rows)
                    b = static_cast<std::uint8_t>(rng.uniform_int(2));
            } else {
                rows = act_rows(agents.usage[s], proto.usage_obs);
            }
            for (int r = 0; r < cfg.ris_rows; ++r)
                env.ris.row_in_use[static_cast<size_t>(s * cfg.ris_rows + r)] = rows[r];
        }
    } else {
        std::fill(env.ris.row_in_use.begin(), env.ris.row_in_use.end(), 1);
    }
    proto.usage = env.ris.row_in_use;
    proto.rows_used = env.ris.rows_in_use();

    proto.phase_action.assign(static_cast<size_t>(R), -1);
    for (int r = 0; r < R; ++r) {
        if (!env.ris.row_in_use[r])
            continue;
        const PhaseAction a = act_phase(agents.phase[r], proto.phase_obs, epsilon, rng);
        proto.phase_action[r] = a.index;
        int& p = env.ris.phase_index[r];
        p = ((p + a.delta()) % kPhaseLevels + kPhaseLevels) % kPhaseLevels;
    }

    std::vector<StreamPlan> plans(static_cast<size_t>(U));
    for (int u = 0; u < U; ++u) {
        const Eigen::VectorXd in = obs.stream_input(u);
        proto.stream_obs.push_back(in);
        if (spec.kinds[u] == RewardKind::rate) {
            plans[u] = rate_stream_plan();
            proto.stream_action.push_back({-1, -1});
            continue;
        }
        const int bg = act_stream(agents.stream_agent(u, kBackground), in, epsilon, rng);
        const int ob = act_stream(agents.stream_agent(u, kObject), in, epsilon, rng);
        plans[u] = StreamPlan::from_choices(bg, ob);
        proto.stream_action.push_back({bg, ob});
    }
    env.prev_streams = plans;

    std::vector<SvdDecomposition> svd;
    std::vector<double> rate(static_cast<size_t>(U));
    for (int u = 0; u < U; ++u) {
        svd.push_back(svd_subchannels(cascade(env.links, env.ris, u, K).cfr));
        rate[u] = sum_rate(svd[u], cfg.snr_db);
    }

    const int F = cfg.schedule.images_per_interval;
    std::vector<std::vector<UserOutcome>> frames(static_cast<size_t>(F), std::vector<UserOutcome>(U));
    for (int f = 0; f < F; ++f)
        for (int u = 0; u < U; ++u) {
            const int label = env.source_rng.uniform_int(kNumClasses);
            const SemanticFrame frame = generate_source(env.source_rng, label);
            const StreamSymbols tx = map_bits_to_streams(frame.bits, plans[u]);
            const ReceivedFrame rx = transmit_frame(tx, svd[u], cfg.snr_db, env.noise_rng);
            const Image decoded = decode_frame(rx.part_bits[kBackground], rx.part_bits[kObject], frame.object_mask);
            const Image object = decode_part(rx.part_bits[kObject], frame.object_mask);
            auto& o = frames[f][u];
            o.acc = classify(object, frame.object_mask, label).correct ? 1.0 : 0.0;
            o.mse = frame_mse(decoded, frame.image);
            o.rate = rate[u];
        }

    IntervalMetrics m;
    m.interval = env.interval;
    m.frames_observed = F * U;
    for (int u = 0; u < U; ++u) {
        UserIntervalMetrics um;
        um.kind = spec.kinds[u];
        um.blocked = env.users[u].direct_link_blocked;
        for (int f = 0; f < F; ++f) {
            um.acc += frames[f][u].acc;
            um.mse += frames[f][u].mse;
        }
        um.acc /= F;
        um.mse /= F;
        um.sum_rate = rate[u];
        um.rows_used = proto.rows_used;
        um.reward = compute_reward(um.kind, um.acc, um.mse, um.sum_rate, um.rows_used, spec.penalty_enabled);
        m.users.push_back(um);
    }

    int known = 0;
    if (phase == TrainingPhase::offline)
        known = F;
    else if (phase == TrainingPhase::online)
        known = std::min(cfg.schedule.known_images_online, F);
    for (int f = 0; f < known; ++f) {
        Experience e = proto;
        e.outcome = frames[f];
        agents.replay.push(std::move(e));
    }
    m.experiences_added = known;

    agents.pending += known;
    const int B = agents.hyper.batch_size;
    while (agents.pending >= B) {
        agents.pending -= B;
        if (agents.replay.size() < B)
            continue;
        for (int i = 0; i < agents.hyper.updates_per_epoch; ++i) {
            dqn_update(agents, spec, env.update_rng);
            ++m.updates_run;
        }
    }
    return m;
}

} // namespace rissc
