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

#include "rissc/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rissc {

namespace {

void require(bool ok, const char* field, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument(std::string(field) + ": " + what);
}

bool is_power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

// One Rician link: LoS on tap 0, NLoS spread over the tap profile.
void draw_link(cd* taps, cd los, const ScenarioConfig& config, RandomStream& rng)
{
    const double kappa = config.los_nlos_power_ratio;
    const double los_amp = std::sqrt(kappa / (kappa + 1.0));
    const double nlos_amp = std::sqrt(1.0 / (kappa + 1.0));
    for (int l = 0; l < config.n_taps; ++l) {
        cd nlos = nlos_amp * rng.complex_normal(config.tap_power[l]);
        taps[l] = (l == 0) ? los_amp * los + nlos : nlos;
    }
}

} // namespace

double distance(const Vec3& a, const Vec3& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double ScenarioConfig::snr_linear() const
{
    return std::pow(10.0, snr_db / 10.0);
}

double ScenarioConfig::reflected_amplitude() const
{
    return std::pow(10.0, ris_path_gain_db / 20.0);
}

void ScenarioConfig::validate() const
{
    require(n_bs_antennas >= 1, "n_bs_antennas", "must be >= 1");
    require(n_ut_antennas >= 1, "n_ut_antennas", "must be >= 1");
    require(n_users == 1 || n_users == 2, "n_users", "must be 1 or 2");
    require(n_ris >= 0, "n_ris", "must be >= 0");
    require(ris_rows >= 1, "ris_rows", "must be >= 1");
    require(ris_cols >= 1, "ris_cols", "must be >= 1");
    require(n_taps >= 1, "n_taps", "must be >= 1");
    require(is_power_of_two(n_subcarriers), "n_subcarriers", "must be a power of two");
    require(cp_length >= cascaded_taps() - 1, "cp_length",
            "must cover the cascaded delay spread (>= 2*n_taps - 2)");
    require(std::isfinite(snr_db), "snr_db", "must be finite");
    require(los_nlos_power_ratio >= 0.0, "los_nlos_power_ratio", "must be >= 0");
    require(static_cast<int>(tap_power.size()) == n_taps, "tap_power",
            "needs one entry per tap");
    double total = 0.0;
    for (double p : tap_power) {
        require(p >= 0.0, "tap_power", "entries must be >= 0");
        total += p;
    }
    require(std::abs(total - 1.0) < 1e-9, "tap_power", "must sum to 1");
    require(static_cast<int>(ris_positions.size()) >= n_ris, "ris_positions",
            "needs a position per RIS");
    require(area_min.x <= area_max.x && area_min.y <= area_max.y && area_min.z <= area_max.z,
            "area_bounds", "min must not exceed max");
    require(blockage_probability >= 0.0 && blockage_probability <= 1.0, "blockage_probability",
            "must lie in [0, 1]");
    require(carrier_wavelength > 0.0, "carrier_wavelength", "must be > 0");
    require(std::isfinite(ris_path_gain_db), "ris_path_gain_db", "must be finite");
    require(schedule.warmup_intervals >= 0, "warmup_intervals", "must be >= 0");
    require(schedule.images_per_interval >= 1, "images_per_interval", "must be >= 1");
    require(schedule.known_images_online >= 0 &&
                schedule.known_images_online <= schedule.images_per_interval,
            "known_images_online", "must lie in [0, images_per_interval]");
}

ChannelRealization ChannelRealization::zeros(int n_bs, int n_ut, int n_ris, int n_elements,
                                             int n_taps, int n_users)
{
    ChannelRealization c;
    c.n_bs = n_bs;
    c.n_ut = n_ut;
    c.n_ris = n_ris;
    c.n_elements = n_elements;
    c.n_taps = n_taps;
    c.bs_ris.assign(static_cast<size_t>(n_ris) * n_elements * n_bs * n_taps, cd{});
    c.users.resize(n_users);
    for (auto& u : c.users) {
        u.direct.assign(static_cast<size_t>(n_bs) * n_ut * n_taps, cd{});
        u.ris_ut.assign(static_cast<size_t>(n_ris) * n_elements * n_ut * n_taps, cd{});
    }
    return c;
}

cd los_term(const Vec3& a, const Vec3& b, double wavelength)
{
    const double d = distance(a, b);
    return std::polar(1.0, -2.0 * std::numbers::pi * d / wavelength);
}

UserState initial_user_state(const ScenarioConfig& config)
{
    UserState s;
    s.position = {0.5 * (config.area_min.x + config.area_max.x),
                  0.5 * (config.area_min.y + config.area_max.y),
                  0.5 * (config.area_min.z + config.area_max.z)};
    return s;
}

UserState step_scenario(const UserState& state, const ScenarioConfig& config, RandomStream& rng)
{
    UserState next;
    const Vec3& lo = config.area_min;
    const Vec3& hi = config.area_max;
    next.position.x = lo.x + (hi.x - lo.x) * rng.uniform();
    next.position.y = lo.y + (hi.y - lo.y) * rng.uniform();
    next.position.z = lo.z + (hi.z - lo.z) * rng.uniform();
    next.direct_link_blocked = rng.bernoulli(config.blockage_probability);
    next.interval_index = state.interval_index + 1;
    return next;
}

ChannelRealization generate_links(std::span<const UserState> users, const ScenarioConfig& config,
                                  RandomStream& rng)
{
    const int n_users = static_cast<int>(users.size());
    const int m_total = config.elements_per_ris();
    auto links = ChannelRealization::zeros(config.n_bs_antennas, config.n_ut_antennas, config.n_ris,
                                           m_total, config.n_taps, n_users);
    links.reflected_amplitude = config.reflected_amplitude();

    for (const auto& u : users) {
        if (distance(u.position, config.bs_position) == 0.0)
            throw std::invalid_argument("generate_links: user coincides with the BS");
        for (int s = 0; s < config.n_ris; ++s)
            if (distance(u.position, config.ris_positions[s]) == 0.0)
                throw std::invalid_argument("generate_links: user coincides with a RIS");
    }
    for (int s = 0; s < config.n_ris; ++s)
        if (distance(config.bs_position, config.ris_positions[s]) == 0.0)
            throw std::invalid_argument("generate_links: RIS coincides with the BS");

    const double lambda = config.carrier_wavelength;
    for (int s = 0; s < config.n_ris; ++s) {
        const cd los = los_term(config.bs_position, config.ris_positions[s], lambda);
        for (int m = 0; m < m_total; ++m)
            for (int i = 0; i < config.n_bs_antennas; ++i)
                draw_link(links.bs_to_ris(s, m, i), los, config, rng);
    }

    for (int u = 0; u < n_users; ++u) {
        const UserState& st = users[u];
        links.users[u].blocked = st.direct_link_blocked;
        const cd los_direct = los_term(config.bs_position, st.position, lambda);
        for (int i = 0; i < config.n_bs_antennas; ++i)
            for (int j = 0; j < config.n_ut_antennas; ++j) {
                cd* taps = links.direct(u, i, j);
                // Drawn even when blocked so the stream stays aligned.
                draw_link(taps, los_direct, config, rng);
                if (st.direct_link_blocked)
                    for (int l = 0; l < config.n_taps; ++l)
                        taps[l] = cd{};
            }
        for (int s = 0; s < config.n_ris; ++s) {
            const cd los = los_term(config.ris_positions[s], st.position, lambda);
            for (int m = 0; m < m_total; ++m)
                for (int j = 0; j < config.n_ut_antennas; ++j)
                    draw_link(links.ris_to_ut(u, s, m, j), los, config, rng);
        }
    }
    return links;
}

ChannelRealization generate_links(const UserState& user, const ScenarioConfig& config,
                                  RandomStream& rng)
{
    return generate_links(std::span<const UserState>(&user, 1), config, rng);
}

} // namespace rissc
