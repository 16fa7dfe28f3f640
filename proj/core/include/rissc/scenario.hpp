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

#ifndef RISSC_SCENARIO_HPP
#define RISSC_SCENARIO_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rissc/random.hpp"

namespace rissc {

using cd = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

struct Schedule {
    int warmup_intervals = 64;
    int images_per_interval = 20;
    int known_images_online = 1;
};

// Root of the simulated world. Defaults reproduce the reference scenario:
// 2x2 MIMO, two RISs with 4x2 elements, two Rician taps, 1024 subcarriers,
// 3 dB SNR, LoS/NLoS power ratio 10.
struct ScenarioConfig {
    int n_bs_antennas = 2;
    int n_ut_antennas = 2;
    int n_users = 1;
    int n_ris = 2;
    int ris_rows = 4;
    int ris_cols = 2;
    int n_taps = 2;
    int n_subcarriers = 1024;
    int cp_length = 8;
    double snr_db = 3.0;
    double los_nlos_power_ratio = 10.0;
    // NLoS power per tap; sums to one. Tap 0 also carries the LoS term.
    std::vector<double> tap_power{0.7, 0.3};
    Vec3 bs_position{0.0, 0.0, 10.0};
    std::vector<Vec3> ris_positions{{5.0, -2.0, 5.0}, {-2.0, 5.0, 5.0}};
    Vec3 area_min{-5.0, -5.0, 0.0};
    Vec3 area_max{5.0, 5.0, 0.0};
    double blockage_probability = 0.5;
    double carrier_wavelength = 0.1;
    // Large-scale power gain of one reflected element path relative to the
    // direct link (product path loss of the two hops), in dB.
    double ris_path_gain_db = -22.0;
    Schedule schedule;
    std::uint64_t seed = 1;

    int elements_per_ris() const { return ris_rows * ris_cols; }
    int total_rows() const { return n_ris * ris_rows; }
    int cascaded_taps() const { return 2 * n_taps - 1; }
    double snr_linear() const;
    double reflected_amplitude() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct UserState {
    Vec3 position;
    bool direct_link_blocked = false;
    int interval_index = -1;
};

// Raw small-scale links for one time interval. Every tap sequence has
// n_taps entries; average power per link is one before blockage.
struct UserLinks {
    std::vector<cd> direct;  // [bs i][ut j][tap]
    std::vector<cd> ris_ut;  // [ris s][element m][ut j][tap]
    bool blocked = false;
};

struct ChannelRealization {
    int n_bs = 0;
    int n_ut = 0;
    int n_ris = 0;
    int n_elements = 0;
    int n_taps = 0;
    // Amplitude applied to every reflected path by the cascade.
    double reflected_amplitude = 1.0;
    std::vector<cd> bs_ris;  // [ris s][element m][bs i][tap]
    std::vector<UserLinks> users;

    static ChannelRealization zeros(int n_bs, int n_ut, int n_ris, int n_elements, int n_taps,
                                    int n_users);

    int n_users() const { return static_cast<int>(users.size()); }

    cd* direct(int u, int i, int j) { return &users[u].direct[((i * n_ut) + j) * n_taps]; }
    const cd* direct(int u, int i, int j) const
    {
        return &users[u].direct[((i * n_ut) + j) * n_taps];
    }
    cd* bs_to_ris(int s, int m, int i) { return &bs_ris[((s * n_elements + m) * n_bs + i) * n_taps]; }
    const cd* bs_to_ris(int s, int m, int i) const
    {
        return &bs_ris[((s * n_elements + m) * n_bs + i) * n_taps];
    }
    cd* ris_to_ut(int u, int s, int m, int j)
    {
        return &users[u].ris_ut[((s * n_elements + m) * n_ut + j) * n_taps];
    }
    const cd* ris_to_ut(int u, int s, int m, int j) const
    {
        return &users[u].ris_ut[((s * n_elements + m) * n_ut + j) * n_taps];
    }
};

// Unit-modulus LoS phase term exp(-j 2 pi d / lambda) for the link a -> b.
cd los_term(const Vec3& a, const Vec3& b, double wavelength);

UserState initial_user_state(const ScenarioConfig& config);

// Uniform re-draw of the position inside the area and an independent
// Bernoulli(blockage_probability) blockage draw; one call per interval.
UserState step_scenario(const UserState& state, const ScenarioConfig& config, RandomStream& rng);

ChannelRealization generate_links(std::span<const UserState> users, const ScenarioConfig& config,
                                  RandomStream& rng);
ChannelRealization generate_links(const UserState& user, const ScenarioConfig& config,
                                  RandomStream& rng);

} // namespace rissc

#endif
