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
#include <cmath>
#include <stdexcept>

namespace rissc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

void check_finite(const Eigen::MatrixXcd& h)
{
    for (Eigen::Index c = 0; c < h.cols(); ++c)
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            if (!std::isfinite(h(r, c).real()) || !std::isfinite(h(r, c).imag()))
                throw std::invalid_argument("svd_subchannels: non-finite channel entry");
}

template <typename Svd>
void store(const Svd& svd, SvdDecomposition& out, int k)
{
    Eigen::MatrixXcd u = svd.matrixU();
    Eigen::MatrixXcd v = svd.matrixV();
    const Eigen::Index n = svd.singularValues().size();
    for (Eigen::Index d = 0; d < u.cols(); ++d) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const cd x = u(r, d);
            if (std::abs(x) > 1e-14) {
                const cd rot = std::conj(x) / std::abs(x);
                u.col(d) *= rot;
                if (d < v.cols())
                    v.col(d) *= rot;
                break;
            }
        }
    }
    out.u[k] = std::move(u);
    out.v[k] = std::move(v);
    out.lambda[k] = svd.singularValues().head(n);
}

// Gray levels per axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double gray16_level(std::uint8_t b0, std::uint8_t b1)
{
    if (b0 == 0)
        return b1 == 0 ? -3.0 : -1.0;
    return b1 == 1 ? 1.0 : 3.0;
}

void gray16_bits(double level, std::uint8_t& b0, std::uint8_t& b1)
{
    if (level < -2.0) {
        b0 = 0;
        b1 = 0;
    } else if (level < 0.0) {
        b0 = 0;
        b1 = 1;
    } else if (level < 2.0) {
        b0 = 1;
        b1 = 1;
    } else {
        b0 = 1;
        b1 = 0;
    }
}

int bits_per_symbol(int order)
{
    if (order == 4)
        return 2;
    if (order == 16)
        return 4;
    throw std::invalid_argument("unsupported modulation order " + std::to_string(order));
}

} // namespace

SvdDecomposition svd_subchannels(std::span<const Eigen::MatrixXcd> cfr)
{
    SvdDecomposition out;
    const auto n = cfr.size();
    out.u.resize(n);
    out.v.resize(n);
    out.lambda.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const auto& h = cfr[k];
        check_finite(h);
        if (h.rows() == 2 && h.cols() == 2) {
            Eigen::Matrix2cd h2 = h;
            Eigen::JacobiSVD<Eigen::Matrix2cd> svd(h2, Eigen::ComputeFullU | Eigen::ComputeFullV);
            store(svd, out, static_cast<int>(k));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
            store(svd, out, static_cast<int>(k));
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> subchannel_gains(std::span<const Eigen::MatrixXcd> cfr)
{
    std::vector<Eigen::VectorXd> gains(cfr.size());
    for (size_t k = 0; k < cfr.size(); ++k) {
        const auto& h = cfr[k];
        check_finite(h);
        if (h.rows() == 2 && h.cols() == 2) {
            Eigen::Matrix2cd h2 = h;
            gains[k] = Eigen::JacobiSVD<Eigen::Matrix2cd>(h2).singularValues();
        } else {
            gains[k] = Eigen::JacobiSVD<Eigen::MatrixXcd>(h).singularValues();
        }
    }
    return gains;
}

StreamPlan StreamPlan::from_choices(int background_stream, int object_stream)
{
    if (background_stream < 0 || background_stream > 1 || object_stream < 0 || object_stream > 1)
        throw std::invalid_argument("StreamPlan: stream index must be 0 or 1");
    StreamPlan p;
    p.stream[kBackground] = background_stream;
    p.stream[kObject] = object_stream;
    return p;
}

std::vector<cd> modulate(std::span<const std::uint8_t> bits, int order)
{
    const int bps = bits_per_symbol(order);
    if (bits.size() % bps != 0)
        throw std::invalid_argument("modulate: bit count is not a multiple of the symbol size");
    std::vector<cd> out(bits.size() / bps);
    for (size_t n = 0; n < out.size(); ++n) {
        const std::uint8_t* b = &bits[n * bps];
        if (order == 4) {
            out[n] = {(b[0] ? 1.0 : -1.0) * kInvSqrt2, (b[1] ? 1.0 : -1.0) * kInvSqrt2};
        } else {
            out[n] = {gray16_level(b[0], b[1]) * kInvSqrt10, gray16_level(b[2], b[3]) * kInvSqrt10};
        }
    }
    return out;
}

BitVector demodulate(std::span<const cd> symbols, int order)
{
    const int bps = bits_per_symbol(order);
    BitVector bits(symbols.size() * bps);
    for (size_t n = 0; n < symbols.size(); ++n) {
        std::uint8_t* b = &bits[n * bps];
        const cd s = symbols[n];
        if (order == 4) {
            b[0] = s.real() >= 0.0;
            b[1] = s.imag() >= 0.0;
        } else {
            const double scale = std::sqrt(10.0);
            gray16_bits(s.real() * scale, b[0], b[1]);
            gray16_bits(s.imag() * scale, b[2], b[3]);
        }
    }
    return bits;
}

StreamSymbols map_bits_to_streams(const std::array<BitVector, 2>& part_bits, const StreamPlan& plan)
{
    for (const auto& b : part_bits)
        if (static_cast<int>(b.size()) != kBitsPerPart)
            throw std::invalid_argument("map_bits_to_streams: each part must carry 2048 bits");
    StreamSymbols out;
    out.plan = plan;
    out.part_bits = part_bits;
    out.streams.assign(2, {});
    if (plan.shared()) {
        BitVector joined;
        joined.reserve(kBitsPerImage);
        joined.insert(joined.end(), part_bits[kBackground].begin(), part_bits[kBackground].end());
        joined.insert(joined.end(), part_bits[kObject].begin(), part_bits[kObject].end());
        out.streams[plan.stream[kBackground]] = modulate(joined, 16);
    } else {
        for (int p : {kBackground, kObject})
            out.streams[plan.stream[p]] = modulate(part_bits[p], 4);
    }
    return out;
}

std::vector<std::vector<cd>> subchannel_outputs(const StreamSymbols& symbols,
                                                const SvdDecomposition& svd, double noise_variance,
                                                RandomStream& rng)
{
    const int K = svd.n_subcarriers();
    const int n_streams = static_cast<int>(symbols.streams.size());
    if (K == 0 || svd.n_streams() < n_streams)
        throw std::invalid_argument("transmit: plan needs more streams than the channel offers");
    size_t longest = 0;
    for (const auto& s : symbols.streams)
        longest = std::max(longest, s.size());

    std::vector<std::vector<cd>> y(n_streams);
    for (int d = 0; d < n_streams; ++d)
        y[d].resize(symbols.streams[d].size());
    const bool noisy = noise_variance > 0.0;
    for (size_t n = 0; n < longest; ++n) {
        const int k = static_cast<int>(n % K);
        for (int d = 0; d < n_streams; ++d) {
            if (n >= symbols.streams[d].size())
                continue;
            cd v = svd.lambda[k](d) * symbols.streams[d][n];
            if (noisy)
                v += rng.complex_normal(noise_variance);
            y[d][n] = v;
        }
    }
    return y;
}

ReceivedFrame transmit_frame(const StreamSymbols& symbols, const SvdDecomposition& svd,
                             double snr_db, RandomStream& rng)
{
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("transmit_frame: SNR must be finite");
    const double noise_variance = std::pow(10.0, -snr_db / 10.0);
    auto y = subchannel_outputs(symbols, svd, noise_variance, rng);
    const int K = svd.n_subcarriers();
    const int order = symbols.plan.modulation_order();

    std::vector<BitVector> stream_bits(y.size());
    for (size_t d = 0; d < y.size(); ++d) {
        for (size_t n = 0; n < y[d].size(); ++n) {
            const double lam = svd.lambda[n % K](static_cast<Eigen::Index>(d));
            if (lam > 1e-12)
                y[d][n] /= lam;
        }
        stream_bits[d] = demodulate(y[d], order);
    }

    ReceivedFrame out;
    const auto& plan = symbols.plan;
    if (plan.shared()) {
        const BitVector& b = stream_bits[plan.stream[kBackground]];
        out.part_bits[kBackground].assign(b.begin(), b.begin() + kBitsPerPart);
        out.part_bits[kObject].assign(b.begin() + kBitsPerPart, b.end());
    } else {
        for (int p : {kBackground, kObject})
            out.part_bits[p] = stream_bits[plan.stream[p]];
    }
    for (int p : {kBackground, kObject}) {
        int errors = 0;
        for (int n = 0; n < kBitsPerPart; ++n)
            errors += out.part_bits[p][n] != symbols.part_bits[p][n];
        out.stream_bit_errors[plan.stream[p]] += errors;
    }
    return out;
}

double sum_rate(std::span<const Eigen::VectorXd> gains, double snr_db)
{
    if (gains.empty())
        return 0.0;
    const double snr = std::pow(10.0, snr_db / 10.0);
    double total = 0.0;
    for (const auto& g : gains)
        for (Eigen::Index d = 0; d < g.size(); ++d)
            total += std::log2(1.0 + g(d) * g(d) * snr);
    return total / static_cast<double>(gains.size());
}

double sum_rate(const SvdDecomposition& svd, double snr_db)
{
    return sum_rate(std::span<const Eigen::VectorXd>(svd.lambda), snr_db);
}

} // namespace rissc
