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

#include "rissc/mimo_ofdm.hpp"

#include <algorithm>
#include <stdexcept>

#include <fftw3.h>

namespace rissc {

namespace {

// RAII wrapper around one in-place FFTW plan of size n.
class FftPlan {
public:
    FftPlan(int n, int sign) : n_(n)
    {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_)
            throw std::bad_alloc();
        plan_ = fftw_plan_dft_1d(n, buf_, buf_, sign, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan()
    {
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }

    void run(std::vector<cd>& data)
    {
        for (int k = 0; k < n_; ++k) {
            buf_[k][0] = data[k].real();
            buf_[k][1] = data[k].imag();
        }
        fftw_execute(plan_);
        for (int k = 0; k < n_; ++k)
            data[k] = {buf_[k][0], buf_[k][1]};
    }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

} // namespace

std::vector<std::vector<cd>> time_domain_reference(const StreamSymbols& symbols,
                                                   const EffectiveChannel& channel,
                                                   const SvdDecomposition& svd, int cp_length,
                                                   bool allow_short_prefix)
{
    const int K = channel.n_subcarriers();
    const int n_bs = channel.n_bs;
    const int n_ut = channel.n_ut;
    const int n_streams = static_cast<int>(symbols.streams.size());
    if (svd.n_subcarriers() != K)
        throw std::invalid_argument("time_domain_reference: decomposition size mismatch");
    if (cp_length < 0 || cp_length >= K)
        throw std::invalid_argument("time_domain_reference: invalid prefix length");
    if (!allow_short_prefix && cp_length < channel.n_taps - 1)
        throw std::invalid_argument("time_domain_reference: cyclic prefix shorter than the delay spread");
    if (n_streams > std::min(n_bs, n_ut))
        throw std::invalid_argument("time_domain_reference: too many streams");

    size_t longest = 0;
    for (const auto& s : symbols.streams)
        longest = std::max(longest, s.size());
    const int n_ofdm = static_cast<int>((longest + K - 1) / K);
    const int sym_len = K + cp_length;
    const int total = n_ofdm * sym_len;

    FftPlan ifft(K, FFTW_BACKWARD);
    FftPlan fft(K, FFTW_FORWARD);

    // Transmit samples per BS antenna, all OFDM symbols back to back.
    std::vector<std::vector<cd>> tx(n_bs, std::vector<cd>(total));
    std::vector<std::vector<cd>> freq(n_bs, std::vector<cd>(K));
    Eigen::VectorXcd x(n_bs);
    for (int o = 0; o < n_ofdm; ++o) {
        for (int k = 0; k < K; ++k) {
            x.setZero();
            const size_t n = static_cast<size_t>(o) * K + k;
            for (int d = 0; d < n_streams; ++d)
                if (n < symbols.streams[d].size())
                    x(d) = symbols.streams[d][n];
            const Eigen::VectorXcd s = svd.v[k] * x;
            for (int i = 0; i < n_bs; ++i)
                freq[i][k] = s(i);
        }
        for (int i = 0; i < n_bs; ++i) {
            ifft.run(freq[i]);
            cd* out = &tx[i][static_cast<size_t>(o) * sym_len];
            for (int t = 0; t < K; ++t)
                out[cp_length + t] = freq[i][t] / static_cast<double>(K);
            for (int t = 0; t < cp_length; ++t)
                out[t] = out[K + t];
        }
    }

    std::vector<std::vector<cd>> rx(n_ut, std::vector<cd>(total));
    for (int j = 0; j < n_ut; ++j) {
        for (int i = 0; i < n_bs; ++i) {
            const cd* h = channel.taps(i, j);
            for (int t = 0; t < total; ++t) {
                cd acc{};
                for (int l = 0; l < channel.n_taps && l <= t; ++l)
                    acc += h[l] * tx[i][t - l];
                rx[j][t] += acc;
            }
        }
    }

    std::vector<std::vector<cd>> out(n_streams);
    for (int d = 0; d < n_streams; ++d)
        out[d].resize(symbols.streams[d].size());
    std::vector<std::vector<cd>> spec(n_ut, std::vector<cd>(K));
    Eigen::VectorXcd y(n_ut);
    for (int o = 0; o < n_ofdm; ++o) {
        for (int j = 0; j < n_ut; ++j) {
            std::copy_n(&rx[j][static_cast<size_t>(o) * sym_len + cp_length], K, spec[j].begin());
            fft.run(spec[j]);
        }
        for (int k = 0; k < K; ++k) {
            for (int j = 0; j < n_ut; ++j)
                y(j) = spec[j][k];
            const Eigen::VectorXcd z = svd.u[k].adjoint() * y;
            const size_t n = static_cast<size_t>(o) * K + k;
            for (int d = 0; d < n_streams; ++d)
                if (n < out[d].size())
                    out[d][n] = z(d);
        }
    }
    return out;
}

} // namespace rissc
