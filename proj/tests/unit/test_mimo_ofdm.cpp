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
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "rissc/mimo_ofdm.hpp"

using namespace rissc;

namespace {

std::vector<Eigen::MatrixXcd> flat_channel(int K, double l0, double l1)
{
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 0) = l0;
    h(1, 1) = l1;
    return std::vector<Eigen::MatrixXcd>(static_cast<size_t>(K), h);
}

Eigen::MatrixXcd random_matrix(RandomStream& rng)
{
    Eigen::MatrixXcd h(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            h(r, c) = rng.complex_normal(1.0);
    return h;
}

std::array<BitVector, 2> random_parts(RandomStream& rng)
{
    std::array<BitVector, 2> parts;
    for (auto& p : parts) {
        p.resize(kBitsPerPart);
        for (auto& b : p)
            b = static_cast<std::uint8_t>(rng.uniform_int(2));
    }
    return parts;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

int hamming(const BitVector& a, const BitVector& b)
{
    int n = 0;
    for (size_t i = 0; i < a.size(); ++i)
        n += a[i] != b[i];
    return n;
}

} // namespace

TEST_CASE("SVD of identity and of a rank-deficient diagonal")
{
    const std::vector<Eigen::MatrixXcd> eye{Eigen::MatrixXcd::Identity(2, 2)};
    const auto s = svd_subchannels(eye);
    CHECK(s.lambda[0](0) == doctest::Approx(1.0));
    CHECK(s.lambda[0](1) == doctest::Approx(1.0));
    const auto d = svd_subchannels(flat_channel(1, 3.0, 0.0));
    CHECK(d.lambda[0](0) == doctest::Approx(3.0));
    CHECK(std::abs(d.lambda[0](1)) < 1e-15);
}

TEST_CASE("SVD reconstruction, orthonormality and ordering on random matrices")
{
    RandomStream rng(17);
    std::vector<Eigen::MatrixXcd> cfr;
    for (int n = 0; n < 1000; ++n)
        cfr.push_back(random_matrix(rng));
    const auto s = svd_subchannels(cfr);
    const auto g = subchannel_gains(cfr);
    for (int k = 0; k < 1000; ++k) {
        const Eigen::MatrixXcd rec = s.u[k] * s.lambda[k].cast<cd>().asDiagonal() * s.v[k].adjoint();
        CHECK((rec - cfr[k]).norm() <= 1e-9 * cfr[k].norm());
        CHECK((s.u[k].adjoint() * s.u[k] - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-10);
        CHECK((s.v[k].adjoint() * s.v[k] - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-10);
        CHECK(s.lambda[k](0) >= s.lambda[k](1));
        CHECK(s.lambda[k](1) >= 0.0);
        CHECK(std::abs(s.u[k](0, 0).imag()) < 1e-12);
        CHECK(s.u[k](0, 0).real() >= 0.0);
        CHECK((g[k] - s.lambda[k]).norm() <= 1e-12);
    }
}

TEST_CASE("SVD rejects non-finite input")
{
    auto cfr = flat_channel(2, 1.0, 1.0);
    cfr[1](0, 1) = cd{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(svd_subchannels(cfr), std::invalid_argument);
}

TEST_CASE("stream mapping sizes and unit energy")
{
    RandomStream rng(3);
    const auto parts = random_parts(rng);
    const auto split = map_bits_to_streams(parts, StreamPlan::from_choices(0, 1));
    REQUIRE(split.streams[0].size() == 1024);
    REQUIRE(split.streams[1].size() == 1024);
    for (const auto& s : split.streams) {
        double e = 0.0;
        for (const auto& x : s)
            e += std::norm(x);
        CHECK(e / 1024.0 == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto shared = map_bits_to_streams(parts, StreamPlan::from_choices(1, 1));
    CHECK(shared.streams[1].size() == 1024);
    CHECK(shared.streams[0].empty());
    CHECK(StreamPlan::from_choices(1, 1).modulation_order() == 16);
    CHECK(StreamPlan::from_choices(1, 0).modulation_order() == 4);
    auto bad = parts;
    bad[0].pop_back();
    CHECK_THROWS_AS(map_bits_to_streams(bad, StreamPlan{}), std::invalid_argument);
}

TEST_CASE("16-QAM constellation over all 16 labels has unit mean energy")
{
    BitVector all;
    for (int v = 0; v < 16; ++v)
        for (int b = 3; b >= 0; --b)
            all.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    const auto sym = modulate(all, 16);
    double e = 0.0;
    for (const auto& x : sym)
        e += std::norm(x);
    CHECK(e / 16.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Gray mapping: nearest neighbours differ in exactly one bit")
{
    for (int order : {4, 16}) {
        const int k = order == 4 ? 2 : 4;
        std::vector<cd> pts;
        std::vector<int> labels;
        for (int v = 0; v < order; ++v) {
            BitVector bits;
            for (int b = k - 1; b >= 0; --b)
                bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
            pts.push_back(modulate(bits, order)[0]);
            labels.push_back(v);
        }
        double dmin = 1e9;
        for (int a = 0; a < order; ++a)
            for (int b = a + 1; b < order; ++b)
                dmin = std::min(dmin, std::abs(pts[a] - pts[b]));
        int pairs = 0;
        for (int a = 0; a < order; ++a)
            for (int b = a + 1; b < order; ++b)
                if (std::abs(std::abs(pts[a] - pts[b]) - dmin) < 1e-9) {
                    CHECK(__builtin_popcount(labels[a] ^ labels[b]) == 1);
                    ++pairs;
                }
        CHECK(pairs == (order == 4 ? 4 : 24));
    }
}

TEST_CASE("modulate then demodulate is the identity on every 12-bit word")
{
    for (int order : {4, 16}) {
        for (int w = 0; w < 4096; ++w) {
            BitVector bits;
            for (int b = 11; b >= 0; --b)
                bits.push_back(static_cast<std::uint8_t>((w >> b) & 1));
            CHECK(demodulate(modulate(bits, order), order) == bits);
        }
    }
    CHECK_THROWS_AS(modulate(BitVector(3), 4), std::invalid_argument);
    CHECK_THROWS_AS(modulate(BitVector(8), 8), std::invalid_argument);
}

TEST_CASE("noiseless transmission is error free for every plan")
{
    RandomStream rng(5), noise(6);
    const auto svd = svd_subchannels(flat_channel(64, 1.0, 1.0));
    const auto parts = random_parts(rng);
    for (int bg = 0; bg < 2; ++bg)
        for (int ob = 0; ob < 2; ++ob) {
            const auto tx = map_bits_to_streams(parts, StreamPlan::from_choices(bg, ob));
            const auto rx = transmit_frame(tx, svd, 400.0, noise);
            CHECK(rx.part_bits[0] == parts[0]);
            CHECK(rx.part_bits[1] == parts[1]);
            CHECK(rx.stream_bit_errors[0] == 0);
            CHECK(rx.stream_bit_errors[1] == 0);
        }
}

TEST_CASE("a dead stream decodes at chance level")
{
    RandomStream rng(7), noise(8);
    const auto svd = svd_subchannels(flat_channel(64, 1.0, 0.0));
    const auto parts = random_parts(rng);
    const auto rx = transmit_frame(map_bits_to_streams(parts, StreamPlan::from_choices(0, 1)), svd, 3.0, noise);
    const double ber = hamming(rx.part_bits[kObject], parts[kObject]) / 2048.0;
    CHECK(ber == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("4-QAM BER at 3 dB matches the closed form")
{
    RandomStream rng(9), noise(10);
    const auto svd = svd_subchannels(flat_channel(1024, 1.0, 1.0));
    const double expected = qfunc(std::sqrt(std::pow(10.0, 0.3)));
    long errors = 0, bits = 0;
    for (int f = 0; f < 60; ++f) {
        const auto parts = random_parts(rng);
        const auto rx = transmit_frame(map_bits_to_streams(parts, StreamPlan::from_choices(0, 1)), svd, 3.0, noise);
        errors += hamming(rx.part_bits[0], parts[0]) + hamming(rx.part_bits[1], parts[1]);
        bits += 2 * kBitsPerPart;
    }
    CHECK(expected == doctest::Approx(0.0786).epsilon(0.01));
    CHECK(static_cast<double>(errors) / bits == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("noise variance gives the configured per-symbol SNR")
{
    RandomStream rng(11), noise(12);
    const auto svd = svd_subchannels(flat_channel(1024, 1.0, 1.0));
    double signal = 0.0, err = 0.0;
    long n = 0;
    for (int f = 0; f < 50; ++f) {
        const auto tx = map_bits_to_streams(random_parts(rng), StreamPlan::from_choices(0, 1));
        const auto y = subchannel_outputs(tx, svd, 1.0 / std::pow(10.0, 0.3), noise);
        for (int d = 0; d < 2; ++d)
            for (size_t i = 0; i < tx.streams[d].size(); ++i) {
                signal += std::norm(tx.streams[d][i]);
                err += std::norm(y[d][i] - tx.streams[d][i]);
                ++n;
            }
    }
    CHECK(n >= 100000);
    CHECK(10.0 * std::log10(signal / err) == doctest::Approx(3.0).epsilon(0.1 / 3.0));
}

TEST_CASE("sum rate examples and monotonicity")
{
    const std::vector<Eigen::VectorXd> dead(4, Eigen::VectorXd::Zero(2));
    CHECK(sum_rate(dead, 3.0) == 0.0);
    const std::vector<Eigen::VectorXd> ones(1, Eigen::VectorXd::Ones(2));
    CHECK(sum_rate(ones, 0.0) == doctest::Approx(2.0));
    RandomStream rng(13);
    std::vector<Eigen::VectorXd> g, g2;
    for (int k = 0; k < 16; ++k) {
        Eigen::VectorXd v(2);
        v << 0.1 + rng.uniform(), 0.05 * rng.uniform();
        g.push_back(v);
        g2.push_back(2.0 * v);
    }
    CHECK(sum_rate(g2, 3.0) > sum_rate(g, 3.0));
}

TEST_CASE("time-domain chain agrees with the subchannel model")
{
    RandomStream rng(14);
    const int K = 64;
    auto check = [&](int n_taps_raw, int cp, double tol) {
        auto links = ChannelRealization::zeros(2, 2, 1, 2, n_taps_raw, 1);
        links.reflected_amplitude = 0.5;
        for (auto& v : links.bs_ris)
            v = rng.complex_normal(1.0);
        for (auto& v : links.users[0].direct)
            v = rng.complex_normal(1.0);
        for (auto& v : links.users[0].ris_ut)
            v = rng.complex_normal(1.0);
        const auto eff = cascade(links, RisConfig::uniform(1, 1, 11), 0, K);
        const auto svd = svd_subchannels(eff.cfr);
        RandomStream bits(15), noise(16);
        const auto tx = map_bits_to_streams(random_parts(bits), StreamPlan::from_choices(0, 1));
        const auto freq = subchannel_outputs(tx, svd, 0.0, noise);
        const auto time = time_domain_reference(tx, eff, svd, cp);
        double num = 0.0, den = 0.0;
        for (int d = 0; d < 2; ++d)
            for (size_t i = 0; i < freq[d].size(); ++i) {
                num += std::norm(freq[d][i] - time[d][i]);
                den += std::norm(freq[d][i]);
            }
        CHECK(std::sqrt(num / den) <= tol);
    };
    check(1, 0, 1e-10);
    check(2, 3, 1e-6);
}

TEST_CASE("time-domain chain refuses or breaks with a short prefix")
{
    RandomStream rng(18);
    auto links = ChannelRealization::zeros(2, 2, 0, 1, 2, 1);
    for (auto& v : links.users[0].direct)
        v = rng.complex_normal(1.0);
    const auto eff = cascade(links, RisConfig::uniform(0, 1, 0), 0, 64);
    const auto svd = svd_subchannels(eff.cfr);
    RandomStream bits(19), noise(20);
    const auto tx = map_bits_to_streams(random_parts(bits), StreamPlan::from_choices(0, 1));
    CHECK_THROWS_AS(time_domain_reference(tx, eff, svd, 1), std::invalid_argument);
    const auto freq = subchannel_outputs(tx, svd, 0.0, noise);
    const auto time = time_domain_reference(tx, eff, svd, 0, true);
    double num = 0.0, den = 0.0;
    for (int d = 0; d < 2; ++d)
        for (size_t i = 0; i < freq[d].size(); ++i) {
            num += std::norm(freq[d][i] - time[d][i]);
            den += std::norm(freq[d][i]);
        }
    CHECK(std::sqrt(num / den) > 1e-3);
}
