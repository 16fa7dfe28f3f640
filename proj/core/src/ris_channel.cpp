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

#include "rissc/ris_channel.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace rissc {

RisConfig RisConfig::uniform(int n_ris, int n_rows, int phase)
{
    RisConfig r;
    r.n_ris = n_ris;
    r.n_rows = n_rows;
    r.phase_index.assign(static_cast<size_t>(n_ris) * n_rows, phase);
    r.row_in_use.assign(static_cast<size_t>(n_ris) * n_rows, 1);
    return r;
}

int RisConfig::rows_in_use() const
{
    int n = 0;
    for (auto f : row_in_use)
        n += f != 0;
    return n;
}

std::vector<cd> steering_vector(int phase_index, int n_cols)
{
    if (phase_index < 0 || phase_index >= kPhaseLevels)
        throw std::out_of_range("steering_vector: phase index " + std::to_string(phase_index) +
                                " outside [0, 63]");
    if (n_cols < 1)
        throw std::invalid_argument("steering_vector: n_cols must be >= 1");
    std::vector<cd> v(n_cols);
    // Exact grid arithmetic: c * phase_index reduced mod 64 before the sine.
    for (int c = 0; c < n_cols; ++c) {
        const int k = (c * phase_index) % kPhaseLevels;
        v[c] = std::polar(1.0, k * std::numbers::pi / 32.0);
    }
    return v;
}

std::vector<cd> cir_to_cfr(std::span<const cd> cir, int n_subcarriers)
{
    const int n_taps = static_cast<int>(cir.size());
    if (n_subcarriers < 1 || n_taps > n_subcarriers)
        throw std::invalid_argument("cir_to_cfr: tap count exceeds the number of subcarriers");
    std::vector<cd> twiddle(n_subcarriers);
    for (int n = 0; n < n_subcarriers; ++n)
        twiddle[n] = std::polar(1.0, -2.0 * std::numbers::pi * n / n_subcarriers);
    std::vector<cd> spectrum(n_subcarriers, cd{});
    for (int k = 0; k < n_subcarriers; ++k) {
        cd acc{};
        for (int l = 0; l < n_taps; ++l)
            acc += cir[l] * twiddle[(static_cast<long>(k) * l) % n_subcarriers];
        spectrum[k] = acc;
    }
    return spectrum;
}

EffectiveChannel cascade(const ChannelRealization& links, const RisConfig& ris, int user,
                         int n_subcarriers)
{
    if (user < 0 || user >= links.n_users())
        throw std::invalid_argument("cascade: user index out of range");
    if (ris.n_ris != links.n_ris)
        throw std::invalid_argument("cascade: RIS count mismatch");
    if (links.n_ris > 0 && (ris.n_rows < 1 || links.n_elements % ris.n_rows != 0))
        throw std::invalid_argument("cascade: element count is not a multiple of the row count");
    if (static_cast<int>(ris.phase_index.size()) != ris.n_ris * ris.n_rows)
        throw std::invalid_argument("cascade: malformed RIS configuration");

    const int L = links.n_taps;
    const int n_cir = 2 * L - 1;
    const int n_bs = links.n_bs;
    const int n_ut = links.n_ut;

    EffectiveChannel eff;
    eff.n_bs = n_bs;
    eff.n_ut = n_ut;
    eff.n_taps = n_cir;
    eff.cir.assign(static_cast<size_t>(n_bs) * n_ut * n_cir, cd{});

    for (int i = 0; i < n_bs; ++i)
        for (int j = 0; j < n_ut; ++j) {
            const cd* d = links.direct(user, i, j);
            cd* out = &eff.cir[(i * n_ut + j) * n_cir];
            for (int l = 0; l < L; ++l)
                out[l] = d[l];
        }

    if (links.n_ris > 0) {
        const int n_cols = links.n_elements / ris.n_rows;
        for (int s = 0; s < links.n_ris; ++s)
            for (int r = 0; r < ris.n_rows; ++r) {
                const auto sv = steering_vector(ris.phase(s, r), n_cols);
                for (int c = 0; c < n_cols; ++c) {
                    const int m = r * n_cols + c;
                    const cd coef = links.reflected_amplitude * sv[c];
                    for (int i = 0; i < n_bs; ++i) {
                        const cd* a = links.bs_to_ris(s, m, i);
                        for (int j = 0; j < n_ut; ++j) {
                            const cd* b = links.ris_to_ut(user, s, m, j);
                            cd* out = &eff.cir[(i * n_ut + j) * n_cir];
                            for (int p = 0; p < L; ++p) {
                                const cd ap = coef * a[p];
                                for (int q = 0; q < L; ++q)
                                    out[p + q] += ap * b[q];
                            }
                        }
                    }
                }
            }
    }

    eff.cfr.assign(n_subcarriers, Eigen::MatrixXcd::Zero(n_ut, n_bs));
    for (int i = 0; i < n_bs; ++i)
        for (int j = 0; j < n_ut; ++j) {
            const auto spec =
                cir_to_cfr(std::span<const cd>(eff.taps(i, j), static_cast<size_t>(n_cir)),
                           n_subcarriers);
            for (int k = 0; k < n_subcarriers; ++k)
                eff.cfr[k](j, i) = spec[k];
        }
    return eff;
}

} // namespace rissc
