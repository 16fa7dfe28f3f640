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

#include "rissc/rl_agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rissc {

std::string_view to_string(RewardKind kind)
{
    switch (kind) {
    case RewardKind::acc:
        return "ACC";
    case RewardKind::mse:
        return "MSE";
    case RewardKind::rate:
        return "RATE";
    }
    return "?";
}

RewardKind parse_reward_kind(std::string_view text)
{
    std::string up(text);
    for (auto& ch : up)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (up == "ACC")
        return RewardKind::acc;
    if (up == "MSE")
        return RewardKind::mse;
    if (up == "RATE")
        return RewardKind::rate;
    throw std::invalid_argument("unknown reward kind '" + std::string(text) + "'");
}

double compute_reward(RewardKind kind, double acc, double mse, double rate, int rows_used,
                      bool penalty_enabled)
{
    const double m = std::max(mse, kMseFloor);
    double r = 0.0;
    switch (kind) {
    case RewardKind::acc:
        r = acc > kAccuracyThreshold ? 10.0 * acc - 10.0 * std::log10(m) : 10.0 * acc - 100.0;
        break;
    case RewardKind::mse:
        r = -10.0 * std::log10(m);
        break;
    case RewardKind::rate:
        r = rate;
        break;
    }
    if (penalty_enabled)
        r -= kRowPenalty * rows_used;
    return r;
}

double joint_multiuser_reward(std::span<const double> rewards)
{
    return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

Eigen::VectorXd channel_features(std::span<const Eigen::MatrixXcd> cfr)
{
    const int K = static_cast<int>(cfr.size());
    if (K < kFeatureSubcarriers)
        throw std::invalid_argument("channel_features: fewer subcarriers than features");
    const auto rows = cfr.front().rows();
    const auto cols = cfr.front().cols();
    Eigen::VectorXd f(kFeatureSubcarriers * rows * cols * 2);
    Eigen::Index n = 0;
    for (int t = 0; t < kFeatureSubcarriers; ++t) {
        const auto& h = cfr[static_cast<size_t>(t) * K / kFeatureSubcarriers];
        if (h.rows() != rows || h.cols() != cols)
            throw std::invalid_argument("channel_features: inconsistent matrix sizes");
        for (Eigen::Index j = 0; j < rows; ++j)
            for (Eigen::Index i = 0; i < cols; ++i) {
                f(n++) = h(j, i).real();
                f(n++) = h(j, i).imag();
            }
    }
    return f;
}

namespace {

Eigen::VectorXd concat(std::initializer_list<const Eigen::VectorXd*> parts)
{
    Eigen::Index n = 0;
    for (const auto* p : parts)
        n += p->size();
    Eigen::VectorXd out(n);
    Eigen::Index at = 0;
    for (const auto* p : parts) {
        out.segment(at, p->size()) = *p;
        at += p->size();
    }
    return out;
}

Eigen::VectorXd concat(const std::vector<Eigen::VectorXd>& parts)
{
    Eigen::Index n = 0;
    for (const auto& p : parts)
        n += p.size();
    Eigen::VectorXd out(n);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.segment(at, p.size()) = p;
        at += p.size();
    }
    return out;
}

} // namespace

Eigen::VectorXd Observation::full() const
{
    const Eigen::VectorXd ch = concat(channel);
    const Eigen::VectorXd st = concat(streams);
    return concat({&ch, &phases, &st, &usage});
}

Eigen::VectorXd Observation::phase_input() const
{
    const Eigen::VectorXd ch = concat(channel);
    return concat({&ch, &phases});
}

Eigen::VectorXd Observation::stream_input(int user) const
{
    return concat({&channel.at(static_cast<size_t>(user)), &phases, &streams.at(static_cast<size_t>(user))});
}

Eigen::VectorXd Observation::usage_input() const
{
    const Eigen::VectorXd ch = concat(channel);
    return concat({&ch, &phases, &usage});
}

Observation build_observation(std::span<const Eigen::VectorXd> channel_per_user, const RisConfig& ris,
                              std::span<const StreamPlan> previous_streams)
{
    if (channel_per_user.size() != previous_streams.size())
        throw std::invalid_argument("build_observation: one stream plan per user required");
    if (static_cast<int>(ris.phase_index.size()) != ris.total_rows() ||
        static_cast<int>(ris.row_in_use.size()) != ris.total_rows())
        throw std::invalid_argument("build_observation: malformed RIS configuration");
    Observation obs;
    obs.channel.assign(channel_per_user.begin(), channel_per_user.end());
    const int R = ris.total_rows();
    obs.phases.resize(2 * R);
    obs.usage.resize(R);
    for (int r = 0; r < R; ++r) {
        const double theta = 2.0 * std::numbers::pi * ris.phase_index[r] / kPhaseLevels;
        obs.phases(2 * r) = std::cos(theta);
        obs.phases(2 * r + 1) = std::sin(theta);
        obs.usage(r) = ris.row_in_use[r] ? 1.0 : 0.0;
    }
    for (const auto& plan : previous_streams) {
        Eigen::VectorXd oh = Eigen::VectorXd::Zero(4);
        oh(plan.stream[kBackground]) = 1.0;
        oh(2 + plan.stream[kObject]) = 1.0;
        obs.streams.push_back(std::move(oh));
    }
    return obs;
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity)
{
    if (capacity <= 0)
        throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Experience e)
{
    if (size() == capacity_)
        items_.pop_front();
    items_.push_back(std::move(e));
}

std::vector<int> ReplayBuffer::sample(int n, RandomStream& rng) const
{
    if (n > size())
        throw std::invalid_argument("ReplayBuffer: not enough experiences to sample");
    // Partial Fisher-Yates over the index range.
    std::vector<int> idx(static_cast<size_t>(size()));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < n; ++i) {
        const int j = i + rng.uniform_int(size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(static_cast<size_t>(n));
    return idx;
}

double experience_reward(const Experience& e, int user, const RewardSpec& spec)
{
    const auto& o = e.outcome.at(static_cast<size_t>(user));
    return compute_reward(spec.kinds.at(static_cast<size_t>(user)), o.acc, o.mse, o.rate, e.rows_used,
                          spec.penalty_enabled);
}

double experience_joint_reward(const Experience& e, const RewardSpec& spec)
{
    std::vector<double> r;
    for (size_t u = 0; u < e.outcome.size(); ++u)
        r.push_back(experience_reward(e, static_cast<int>(u), spec));
    return joint_multiuser_reward(r);
}

AgentSet make_agent_set(const ScenarioConfig& config, const AgentHyper& hyper, RandomStream& rng)
{
    AgentSet a;
    a.n_users = config.n_users;
    a.n_ris = config.n_ris;
    a.n_rows = config.ris_rows;
    a.hyper = hyper;
    a.replay = ReplayBuffer(hyper.replay_capacity);

    const int ch = kFeatureSubcarriers * 2 * config.n_bs_antennas * config.n_ut_antennas;
    const int R = config.total_rows();
    using A = Activation;
    for (int r = 0; r < R; ++r) {
        RandomStream s = rng.derive("phase" + std::to_string(r));
        a.phase.push_back({init_network({ch * config.n_users + 2 * R, 128, 256, 64, 5},
                                        {A::relu, A::relu, A::relu, A::linear}, s),
                           {}});
    }
    for (int u = 0; u < config.n_users; ++u)
        for (int p = 0; p < 2; ++p) {
            RandomStream s = rng.derive("stream" + std::to_string(u) + "." + std::to_string(p));
            a.stream.push_back({init_network({ch + 2 * R + 4, 128, 128, 2}, {A::relu, A::relu, A::linear}, s), {}});
        }
    for (int s_idx = 0; s_idx < config.n_ris; ++s_idx) {
        RandomStream s = rng.derive("usage" + std::to_string(s_idx));
        a.usage.push_back({init_network({ch * config.n_users + 3 * R, 128, 128, config.ris_rows},
                                        {A::relu, A::relu, A::sigmoid}, s),
                           {}});
    }
    return a;
}

int argmax_lowest(const Eigen::VectorXd& q)
{
    int best = 0;
    for (Eigen::Index i = 1; i < q.size(); ++i)
        if (q(i) > q(best))
            best = static_cast<int>(i);
    return best;
}

PhaseAction act_phase(const QAgent& agent, const Eigen::VectorXd& obs, double epsilon, RandomStream& rng)
{
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("act_phase: epsilon must lie in [0, 1]");
    if (epsilon > 0.0 && rng.uniform() < epsilon)
        return {rng.uniform_int(static_cast<int>(kPhaseDeltas.size()))};
    return {argmax_lowest(forward(agent.net, obs))};
}

int act_stream(const QAgent& agent, const Eigen::VectorXd& obs, double epsilon, RandomStream& rng)
{
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("act_stream: epsilon must lie in [0, 1]");
    if (epsilon > 0.0 && rng.uniform() < epsilon)
        return rng.uniform_int(2);
    return argmax_lowest(forward(agent.net, obs));
}

std::vector<std::uint8_t> act_rows(const QAgent& agent, const Eigen::VectorXd& obs)
{
    const Eigen::VectorXd y = forward(agent.net, obs);
    std::vector<std::uint8_t> out(static_cast<size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i)
        out[static_cast<size_t>(i)] = y(i) >= 0.5;
    return out;
}

UpdateLoss dqn_update(AgentSet& agents, const RewardSpec& spec, RandomStream& rng)
{
    const int B = agents.hyper.batch_size;
    if (agents.replay.size() < B || B <= 0)
        throw std::invalid_argument("dqn_update: replay holds fewer experiences than one batch");
    const auto idx = agents.replay.sample(B, rng);
    std::vector<const Experience*> batch;
    for (int i : idx)
        batch.push_back(&agents.replay[i]);

    std::vector<double> joint(static_cast<size_t>(B));
    std::vector<std::vector<double>> per_user(static_cast<size_t>(B));
    for (int b = 0; b < B; ++b) {
        for (int u = 0; u < agents.n_users; ++u)
            per_user[b].push_back(experience_reward(*batch[b], u, spec));
        joint[b] = joint_multiuser_reward(per_user[b]);
    }
    const double scale = agents.hyper.reward_scale;
    const double lr = agents.hyper.learning_rate;
    UpdateLoss loss;

    std::vector<Eigen::VectorXd> in;
    std::vector<Target> tg;
    int trained = 0;
    for (size_t r = 0; r < agents.phase.size(); ++r) {
        in.clear();
        tg.clear();
        for (int b = 0; b < B; ++b) {
            const int a = batch[b]->phase_action[r];
            if (a < 0)
                continue;
            in.push_back(batch[b]->phase_obs);
            tg.push_back({a, scale * joint[b], {}});
        }
        if (in.empty())
            continue;
        loss.phase += train_batch(agents.phase[r].net, in, tg, Loss::mse_on_selected_output,
                                  agents.phase[r].optimizer, lr);
        ++trained;
    }
    if (trained)
        loss.phase /= trained;

    trained = 0;
    for (int u = 0; u < agents.n_users; ++u)
        for (int p = 0; p < 2; ++p) {
            in.clear();
            tg.clear();
            for (int b = 0; b < B; ++b) {
                const int a = batch[b]->stream_action[u][p];
                if (a < 0)
                    continue;
                in.push_back(batch[b]->stream_obs[u]);
                tg.push_back({a, scale * per_user[b][u], {}});
            }
            if (in.empty())
                continue;
            auto& agent = agents.stream_agent(u, p);
            loss.stream += train_batch(agent.net, in, tg, Loss::mse_on_selected_output, agent.optimizer, lr);
            ++trained;
        }
    if (trained)
        loss.stream /= trained;

    double batch_mean = 0.0;
    int n_usage = 0;
    for (int b = 0; b < B; ++b)
        if (batch[b]->usage_learned) {
            batch_mean += joint[b];
            ++n_usage;
        }
    if (n_usage > 0) {
        batch_mean /= n_usage;
        if (!agents.baseline_ready) {
            agents.reward_baseline = batch_mean;
            agents.baseline_ready = true;
        }
        // Labels follow the sign of the advantage and are weighted by its
        // size, normalised to mean one over the batch. The sign alone would
        // hide the row penalty behind the much larger swings of the
        // accuracy reward.
        double mean_abs = 0.0;
        for (int b = 0; b < B; ++b)
            if (batch[b]->usage_learned)
                mean_abs += std::abs(joint[b] - agents.reward_baseline);
        mean_abs /= n_usage;
        trained = 0;
        for (int s = 0; s < agents.n_ris; ++s) {
            in.clear();
            tg.clear();
            for (int b = 0; b < B; ++b) {
                if (!batch[b]->usage_learned)
                    continue;
                const double advantage = joint[b] - agents.reward_baseline;
                const bool good = advantage >= 0.0;
                Eigen::VectorXd t(agents.n_rows);
                for (int r = 0; r < agents.n_rows; ++r) {
                    const bool taken = batch[b]->usage[static_cast<size_t>(s * agents.n_rows + r)] != 0;
                    t(r) = (taken == good) ? 1.0 : 0.0;
                }
                in.push_back(batch[b]->usage_obs);
                tg.push_back({-1, 0.0, std::move(t), mean_abs > 0.0 ? std::abs(advantage) / mean_abs : 1.0});
            }
            loss.usage += train_batch(agents.usage[s].net, in, tg, Loss::binary_cross_entropy,
                                      agents.usage[s].optimizer, lr);
            ++trained;
        }
        if (trained)
            loss.usage /= trained;
        agents.reward_baseline += agents.hyper.baseline_rate * (batch_mean - agents.reward_baseline);
    }
    return loss;
}

} // namespace rissc
