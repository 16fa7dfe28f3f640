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

#ifndef RISSC_RL_AGENTS_HPP
#define RISSC_RL_AGENTS_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rissc/mimo_ofdm.hpp"
#include "rissc/neural_core.hpp"
#include "rissc/random.hpp"
#include "rissc/ris_channel.hpp"
#include "rissc/scenario.hpp"

namespace rissc {

enum class RewardKind { acc, mse, rate };

std::string_view to_string(RewardKind kind);
// Accepts "ACC", "MSE", "RATE" in any case; throws std::invalid_argument.
RewardKind parse_reward_kind(std::string_view text);

inline constexpr double kAccuracyThreshold = 0.85;
inline constexpr double kRowPenalty = 5.0;
inline constexpr double kMseFloor = 1e-6;

// ACC: 10 acc - 10 log10(mse) above the accuracy threshold, 10 acc - 100 at or
// below it. MSE: -10 log10(mse). RATE: the sum rate. With the penalty on,
// 5 per used row is subtracted. mse is floored at 1e-6.
double compute_reward(RewardKind kind, double acc, double mse, double rate, int rows_used,
                      bool penalty_enabled);

double joint_multiuser_reward(std::span<const double> rewards);

inline constexpr std::array<int, 5> kPhaseDeltas{-3, -1, 0, 1, 3};
inline constexpr int kFeatureSubcarriers = 16;

struct PhaseAction {
    int index = 2;
    int delta() const { return kPhaseDeltas[index]; }
};

// Re/Im of every (ut, bs) entry on 16 evenly spaced subcarriers.
Eigen::VectorXd channel_features(std::span<const Eigen::MatrixXcd> cfr);

// Observation blocks. Family layouts:
//   phase agents: [channel of every user | phases]
//   stream agents of user u: [channel of u | phases | stream one-hot of u]
//   usage agents: [channel of every user | phases | usage]
// full() concatenates [channels | phases | stream one-hots | usage].
struct Observation {
    std::vector<Eigen::VectorXd> channel;
    Eigen::VectorXd phases;  // cos, sin of each row's phase
    std::vector<Eigen::VectorXd> streams;  // per user: one-hot over 2 streams, per part
    Eigen::VectorXd usage;

    Eigen::VectorXd full() const;
    Eigen::VectorXd phase_input() const;
    Eigen::VectorXd stream_input(int user) const;
    Eigen::VectorXd usage_input() const;
};

Observation build_observation(std::span<const Eigen::VectorXd> channel_per_user, const RisConfig& ris,
                              std::span<const StreamPlan> previous_streams);

struct AgentHyper {
    double learning_rate = 1e-3;
    int batch_size = 8;
    int replay_capacity = 1024;
    int updates_per_epoch = 4;
    // Q heads regress reward_scale * reward.
    double reward_scale = 1.0;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    // Step size of the running reward mean that labels usage targets.
    double baseline_rate = 0.05;
};

struct QAgent {
    DenseNetwork net;
    AdamState optimizer;
};

struct UserOutcome {
    double acc = 0.0;
    double mse = 1.0;
    double rate = 0.0;
};

// One known frame: what every agent saw, what it did, and what came back.
// Rewards are recomputed from the outcomes at update time, so experiences
// recorded before a requirement switch are scored under the new requirement.
struct Experience {
    Eigen::VectorXd phase_obs;
    Eigen::VectorXd usage_obs;
    std::vector<Eigen::VectorXd> stream_obs;
    std::vector<int> phase_action;  // per row; -1 when the row was not adjusted
    std::vector<std::array<int, 2>> stream_action;  // per user; -1 when not learned
    std::vector<std::uint8_t> usage;
    bool usage_learned = false;
    std::vector<UserOutcome> outcome;
    int rows_used = 0;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity = 1024);

    void push(Experience e);
    int size() const { return static_cast<int>(items_.size()); }
    int capacity() const { return capacity_; }
    const Experience& operator[](int i) const { return items_[static_cast<size_t>(i)]; }
    // Distinct indices, uniformly without replacement.
    std::vector<int> sample(int n, RandomStream& rng) const;

private:
    int capacity_;
    std::deque<Experience> items_;
};

struct RewardSpec {
    std::vector<RewardKind> kinds;  // per user
    bool penalty_enabled = false;
};

double experience_reward(const Experience& e, int user, const RewardSpec& spec);
double experience_joint_reward(const Experience& e, const RewardSpec& spec);

// Phase agents: one per RIS row (5 linear Q heads), shared by all users.
// Stream agents: one per (user, part) (2 linear Q heads).
// Usage agents: one per RIS (one sigmoid head per row).
struct AgentSet {
    int n_users = 1;
    int n_ris = 0;
    int n_rows = 0;
    AgentHyper hyper;
    std::vector<QAgent> phase;
    std::vector<QAgent> stream;
    std::vector<QAgent> usage;
    ReplayBuffer replay{1024};
    double reward_baseline = 0.0;
    bool baseline_ready = false;
    int pending = 0;

    int agent_count() const { return static_cast<int>(phase.size() + stream.size() + usage.size()); }
    QAgent& stream_agent(int user, int part) { return stream[static_cast<size_t>(user * 2 + part)]; }
    const QAgent& stream_agent(int user, int part) const { return stream[static_cast<size_t>(user * 2 + part)]; }
};

AgentSet make_agent_set(const ScenarioConfig& config, const AgentHyper& hyper, RandomStream& rng);

// Checkpoints hold the networks only (no optimiser state or replay): one
// snapshot file per agent plus manifest.txt, whose lines are
// "<role> <file>" after a "rissc-agents 1" header. Roles look like
// phase.s0.r3, stream.u1.object and usage.s1.
void save_agent_set(const AgentSet& agents, const std::filesystem::path& dir);
// Loads into a set built for the same scenario; throws std::invalid_argument
// when roles or network shapes differ and std::runtime_error on I/O errors.
void load_agent_set(AgentSet& agents, const std::filesystem::path& dir);

// epsilon-greedy over Q values; greedy ties go to the lowest index.
PhaseAction act_phase(const QAgent& agent, const Eigen::VectorXd& obs, double epsilon, RandomStream& rng);
int act_stream(const QAgent& agent, const Eigen::VectorXd& obs, double epsilon, RandomStream& rng);
// Sigmoid outputs >= 0.5 mean "adjust this row".
std::vector<std::uint8_t> act_rows(const QAgent& agent, const Eigen::VectorXd& obs);

int argmax_lowest(const Eigen::VectorXd& q);

struct UpdateLoss {
    double phase = 0.0;
    double stream = 0.0;
    double usage = 0.0;
};

// One regression step per agent on a shared batch drawn from the replay.
// Q heads move toward reward_scale * immediate reward (no bootstrapping);
// usage heads get binary cross-entropy against the taken bit when the joint
// reward beats its running mean, and the flipped bit otherwise.
UpdateLoss dqn_update(AgentSet& agents, const RewardSpec& spec, RandomStream& rng);

enum class TrainingPhase { offline, online, frozen };

// Everything one simulated world carries between intervals.
struct Environment {
    ScenarioConfig config;
    bool frozen_channel = false;
    // When false every row is adjusted each interval and usage agents idle.
    bool usage_control = false;
    std::vector<UserState> users;
    ChannelRealization links;
    bool links_ready = false;
    RisConfig ris;
    std::vector<StreamPlan> prev_streams;
    RandomStream scenario_rng{0};
    RandomStream channel_rng{0};
    RandomStream source_rng{0};
    RandomStream noise_rng{0};
    RandomStream policy_rng{0};
    RandomStream update_rng{0};
    int interval = -1;

    // Streams derive from world_seed by label; initial phases are random.
    static Environment create(const ScenarioConfig& config, std::uint64_t world_seed);
};

struct UserIntervalMetrics {
    RewardKind kind = RewardKind::acc;
    bool blocked = false;
    double acc = 0.0;
    double mse = 0.0;
    double reward = 0.0;
    double sum_rate = 0.0;
    int rows_used = 0;
};

struct IntervalMetrics {
    int interval = 0;
    std::vector<UserIntervalMetrics> users;
    int frames_observed = 0;
    int experiences_added = 0;
    int updates_run = 0;
};

// One time interval: move the users (unless the channel is frozen), observe,
// act, transmit images_per_interval frames per user, score them, record the
// known frames and train once per batch_size new experiences.
IntervalMetrics run_time_interval(Environment& env, AgentSet& agents, TrainingPhase phase,
                                  const RewardSpec& spec, double epsilon);

// Stream plan used for rate-driven users, which do not distinguish parts:
// both parts share the strongest stream.
inline StreamPlan rate_stream_plan() { return StreamPlan::from_choices(0, 0); }

} // namespace rissc

#endif
