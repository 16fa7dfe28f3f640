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
#include <fstream>
#include <ostream>
#include <sstream>

#include "rissc/harness.hpp"
#include "rissc/mimo_ofdm.hpp"
#include "rissc/semantic_codec.hpp"

namespace rissc {

bool SelftestReport::passed() const
{
    for (const auto& c : checks)
        if (!c.second)
            return false;
    return !checks.empty();
}

namespace {

bool check_svd(RandomStream& rng)
{
    for (int n = 0; n < 200; ++n) {
        std::vector<Eigen::MatrixXcd> h(1, Eigen::MatrixXcd(2, 2));
        for (int i = 0; i < 4; ++i)
            h[0](i / 2, i % 2) = rng.complex_normal(1.0);
        const auto d = svd_subchannels(h);
        const Eigen::MatrixXcd rec = d.u[0].leftCols(2) * d.lambda[0].asDiagonal() * d.v[0].leftCols(2).adjoint();
        if ((rec - h[0]).norm() > 1e-9 * h[0].norm() || d.lambda[0](0) < d.lambda[0](1) || d.lambda[0](1) < 0)
            return false;
    }
    return true;
}

bool check_qam()
{
    for (int order : {4, 16}) {
        BitVector bits;
        for (int v = 0; v < 4096; ++v)
            for (int b = 11; b >= 0; --b)
                bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
        if (demodulate(modulate(bits, order), order) != bits)
            return false;
    }
    return true;
}

bool check_rewards()
{
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    return near(compute_reward(RewardKind::acc, 0.95, 0.01, 0, 0, false), 29.5) &&
           near(compute_reward(RewardKind::acc, 0.80, 0.01, 0, 0, false), -92.0) &&
           near(compute_reward(RewardKind::mse, 0, 0.1, 0, 0, false), 10.0) &&
           near(compute_reward(RewardKind::rate, 0, 0.1, 0, 4, true), -20.0) &&
           near(compute_reward(RewardKind::acc, 0.85, 0.01, 0, 0, false), 8.5 - 100.0);
}

bool check_codec(RandomStream& rng)
{
    for (int n = 0; n < 50; ++n) {
        const int label = n % kNumClasses;
        const auto f = generate_source(rng, label);
        const Image out = decode_frame(f.bits[kBackground], f.bits[kObject], f.object_mask);
        if (frame_mse(out, f.image) > 0.01)
            return false;
        if (!classify(decode_part(f.bits[kObject], f.object_mask), f.object_mask, label).correct)
            return false;
    }
    return true;
}

ExperimentSpec small_experiment()
{
    ExperimentSpec spec = parse_config(
        "scenario.n_subcarriers = 64\n"
        "scenario.seed = 7\n"
        "schedule.warmup_intervals = 4\n"
        "schedule.images_per_interval = 4\n"
        "experiment.n_intervals = 12\n"
        "experiment.n_seeds = 2\n"
        "experiment.penalty = true\n"
        "experiment.reward = ACC:0-6,MSE:6-12\n");
    return spec;
}

std::string render(const ExperimentSpec& spec)
{
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (int i = 0; i < spec.n_seeds; ++i)
        for (const auto& row : run_seed(spec, i))
            out << format_row(row) << '\n';
    return out.str();
}

} // namespace

SelftestReport run_selftest(const std::string& metrics_path, std::ostream& log)
{
    SelftestReport report;
    RandomStream rng(20260101);
    auto record = [&](const std::string& name, auto&& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            log << "error in " << name << ": " << e.what() << '\n';
        }
        report.checks.emplace_back(name, ok);
        log << (ok ? "PASS " : "FAIL ") << name << '\n';
    };
    record("svd_reconstruction", [&] { return check_svd(rng); });
    record("qam_round_trip", [] { return check_qam(); });
    record("reward_formulas", [] { return check_rewards(); });
    record("codec_round_trip", [&] { return check_codec(rng); });
    std::string first;
    record("experiment_determinism", [&] {
        const auto spec = small_experiment();
        first = render(spec);
        return first == render(spec);
    });
    record("metrics_file", [&] {
        std::ofstream out(metrics_path, std::ios::binary | std::ios::trunc);
        out << first;
        return static_cast<bool>(out) && !first.empty();
    });
    return report;
}

} // namespace rissc
