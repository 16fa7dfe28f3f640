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

#ifndef RISSC_MIMO_OFDM_HPP
#define RISSC_MIMO_OFDM_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rissc/random.hpp"
#include "rissc/ris_channel.hpp"

namespace rissc {

using BitVector = std::vector<std::uint8_t>;

inline constexpr int kBitsPerPart = 2048;
inline constexpr int kBitsPerImage = 2 * kBitsPerPart;

enum Part : int { kBackground = 0, kObject = 1 };

// H_k = U_k diag(lambda_k) V_k^H for every subcarrier, singular values
// descending. Each left singular vector is rotated so that its first
// nonzero component is real-positive (the right vector gets the same
// rotation), which makes the decomposition reproducible.
struct SvdDecomposition {
    std::vector<Eigen::MatrixXcd> u;
    std::vector<Eigen::MatrixXcd> v;
    std::vector<Eigen::VectorXd> lambda;

    int n_subcarriers() const { return static_cast<int>(lambda.size()); }
    int n_streams() const { return lambda.empty() ? 0 : static_cast<int>(lambda.front().size()); }
};

SvdDecomposition svd_subchannels(std::span<const Eigen::MatrixXcd> cfr);

// Singular values only; same values as svd_subchannels without the vectors.
std::vector<Eigen::VectorXd> subchannel_gains(std::span<const Eigen::MatrixXcd> cfr);

// Which stream carries each semantic part. Both parts on one stream means a
// shared 16-QAM stream with the other stream idle; otherwise 4-QAM on each.
struct StreamPlan {
    std::array<int, 2> stream{0, 1};  // indexed by Part

    static StreamPlan from_choices(int background_stream, int object_stream);

    bool shared() const { return stream[kBackground] == stream[kObject]; }
    int modulation_order() const { return shared() ? 16 : 4; }
    friend bool operator==(const StreamPlan&, const StreamPlan&) = default;
};

// Gray-coded square QAM with unit average energy; order 4 or 16.
std::vector<cd> modulate(std::span<const std::uint8_t> bits, int order);
BitVector demodulate(std::span<const cd> symbols, int order);

struct StreamSymbols {
    StreamPlan plan;
    std::array<BitVector, 2> part_bits;
    std::vector<std::vector<cd>> streams;  // one sequence per stream (2)
};

// Shared plan: background bits then object bits on one 16-QAM stream.
// Split plan: each part on its own 4-QAM stream.
StreamSymbols map_bits_to_streams(const std::array<BitVector, 2>& part_bits, const StreamPlan& plan);

// Per-stream subchannel outputs lambda_{k,d} x + n. Symbol n of a stream sits
// on subcarrier n mod K of OFDM symbol n / K. Noise is drawn in slot order
// (symbol index, then stream) and only for streams that carry symbols.
std::vector<std::vector<cd>> subchannel_outputs(const StreamSymbols& symbols,
                                                const SvdDecomposition& svd, double noise_variance,
                                                RandomStream& rng);

struct ReceivedFrame {
    std::array<BitVector, 2> part_bits;
    std::array<int, 2> stream_bit_errors{0, 0};
};

// Noise variance 1 / SNR so that a unit-gain subchannel sees the configured
// average symbol SNR. Demodulation divides by lambda (skipped when lambda is
// zero) and makes hard minimum-distance decisions.
ReceivedFrame transmit_frame(const StreamSymbols& symbols, const SvdDecomposition& svd,
                             double snr_db, RandomStream& rng);

// (1/K) sum_k sum_d log2(1 + lambda_{k,d}^2 * snr).
double sum_rate(const SvdDecomposition& svd, double snr_db);
double sum_rate(std::span<const Eigen::VectorXd> gains, double snr_db);

// Explicit OFDM chain used as an oracle for the subchannel model: precode,
// inverse FFT, cyclic prefix, per-antenna tap convolution, prefix removal,
// FFT, combining. Returns U^H y per stream in the same slot layout as
// subchannel_outputs. Throws when the prefix is shorter than the delay
// spread unless allow_short_prefix is set (negative controls).
std::vector<std::vector<cd>> time_domain_reference(const StreamSymbols& symbols,
                                                   const EffectiveChannel& channel,
                                                   const SvdDecomposition& svd, int cp_length,
                                                   bool allow_short_prefix = false);

} // namespace rissc

#endif
