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

#ifndef RISSC_RIS_CHANNEL_HPP
#define RISSC_RIS_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rissc/scenario.hpp"

namespace rissc {

// Phase grid: index k encodes phi = k * pi / 32.
inline constexpr int kPhaseLevels = 64;

// Per-row phase indices and usage flags for all RISs. Elements in a row are
// driven jointly by the row's steering vector; reflection amplitude is 1.
struct RisConfig {
    int n_ris = 0;
    int n_rows = 0;
    std::vector<int> phase_index;        // [ris s][row r]
    std::vector<std::uint8_t> row_in_use;  // [ris s][row r]

    static RisConfig uniform(int n_ris, int n_rows, int phase = 0);

    int total_rows() const { return n_ris * n_rows; }
    int rows_in_use() const;
    int& phase(int s, int r) { return phase_index[s * n_rows + r]; }
    int phase(int s, int r) const { return phase_index[s * n_rows + r]; }
    bool in_use(int s, int r) const { return row_in_use[s * n_rows + r] != 0; }
};

// Cascaded CIR per antenna pair and its per-subcarrier CFR matrices.
struct EffectiveChannel {
    int n_bs = 0;
    int n_ut = 0;
    int n_taps = 0;  // 2L - 1
    std::vector<cd> cir;  // [bs i][ut j][tap]
    std::vector<Eigen::MatrixXcd> cfr;  // [subcarrier k] -> (ut j, bs i)

    const cd* taps(int i, int j) const { return &cir[(i * n_ut + j) * n_taps]; }
    int n_subcarriers() const { return static_cast<int>(cfr.size()); }
};

// [1, e^{j phi}, ..., e^{j (n_cols - 1) phi}], phi = phase_index * pi / 32.
std::vector<cd> steering_vector(int phase_index, int n_cols);

// Effective channel of user `user`: direct link plus every reflected
// element path (linear tap convolution), transformed to K subcarriers.
EffectiveChannel cascade(const ChannelRealization& links, const RisConfig& ris, int user,
                         int n_subcarriers);

// spectrum[k] = sum_l cir[l] exp(-j 2 pi k l / K).
std::vector<cd> cir_to_cfr(std::span<const cd> cir, int n_subcarriers);

} // namespace rissc

#endif
