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
#include <stdexcept>

#include "rissc/harness.hpp"
#include "rissc/mimo_ofdm.hpp"
#include "rissc/ris_channel.hpp"

namespace rissc {

namespace {

// sum_d log2(1 + lambda_d^2 snr) = log2 det(I + snr H^H H).
double log_det_rate(const Eigen::MatrixXcd& h, double snr)
{
    if (h.rows() == 2 && h.cols() == 2) {
        const double fro = h.squaredNorm();
        const double det = std::norm(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0));
        return std::log2(1.0 + snr * fro + snr * snr * det);
    }
    const Eigen::MatrixXcd g =
        Eigen::MatrixXcd::Identity(h.cols(), h.cols()) + snr * h.adjoint() * h;
    return std::log2(g.determinant().real());
}

} // namespace

ChannelRealization frozen_channel_draw(const ScenarioConfig& config, std::uint64_t world_seed)
{
    Environment env = Environment::create(config, world_seed);
    for (auto& u : env.users)
        u = step_scenario(u, config, env.scenario_rng);
    return generate_links(env.users, config, env.channel_rng);
}

double evaluate_sum_rate(const ChannelRealization& links, const ScenarioConfig& config,
                         const std::vector<int>& phases, int user)
{
    RisConfig ris = RisConfig::uniform(config.n_ris, config.ris_rows, 0);
    if (phases.size() != ris.phase_index.size())
        throw std::invalid_argument("evaluate_sum_rate: one phase per row required");
    ris.phase_index = phases;
    const auto ch = cascade(links, ris, user, config.n_subcarriers);
    return sum_rate(subchannel_gains(ch.cfr), config.snr_db);
}

OracleResult exhaustive_oracle(const ChannelRealization& links, const ScenarioConfig& config, int user,
                               int max_rows)
{
    const int R = config.total_rows();
    if (R > max_rows || R > 2)
        throw std::invalid_argument("exhaustive_oracle: search space exceeds 64^2 configurations");
    const int K = config.n_subcarriers;
    const double snr = config.snr_linear();

    // The CFR is affine in each row's contribution, so
    // H(p_0, p_1) = H(0, 0) + D_0(p_0) + D_1(p_1).
    RisConfig ris = RisConfig::uniform(config.n_ris, config.ris_rows, 0);
    const auto base = cascade(links, ris, user, K).cfr;
    std::vector<std::vector<std::vector<Eigen::MatrixXcd>>> delta(static_cast<size_t>(R));
    for (int r = 0; r < R; ++r) {
        delta[r].resize(kPhaseLevels);
        for (int p = 0; p < kPhaseLevels; ++p) {
            RisConfig probe = ris;
            probe.phase_index[r] = p;
            auto cfr = cascade(links, probe, user, K).cfr;
            for (int k = 0; k < K; ++k)
                cfr[k] -= base[k];
            delta[r][p] = std::move(cfr);
        }
    }

    OracleResult best;
    best.phases.assign(static_cast<size_t>(R), 0);
    best.value = -1.0;
    const long total = R == 0 ? 1 : (R == 1 ? kPhaseLevels : kPhaseLevels * kPhaseLevels);
    std::vector<int> phases(static_cast<size_t>(R), 0);
    Eigen::MatrixXcd h;
    for (long n = 0; n < total; ++n) {
        if (R >= 1)
            phases[0] = static_cast<int>(R == 2 ? n / kPhaseLevels : n);
        if (R == 2)
            phases[1] = static_cast<int>(n % kPhaseLevels);
        double rate = 0.0;
        for (int k = 0; k < K; ++k) {
            h = base[k];
            for (int r = 0; r < R; ++r)
                h += delta[r][phases[r]][k];
            rate += log_det_rate(h, snr);
        }
        rate /= K;
        ++best.evaluated;
        if (rate > best.value) {
            best.value = rate;
            best.phases = phases;
        }
    }
    return best;
}

} // namespace rissc
