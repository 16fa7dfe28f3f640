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

#ifndef RISSC_RANDOM_HPP
#define RISSC_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace rissc {

// Seed derivation: root seed -> per-seed world -> per-module streams.
// A child seed depends only on the parent seed and the label, never on how
// many values the parent has already produced.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

// Deterministic random stream. All floating-point draws are computed from the
// raw 64-bit engine output so sequences are identical across standard
// libraries (std:: distributions are implementation-defined).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    RandomStream derive(std::string_view label) const;

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform();
    // Uniform integer on [0, n).
    int uniform_int(int n);
    bool bernoulli(double p);
    // Standard normal (Box-Muller, one value per call).
    double normal();
    // Circularly-symmetric complex Gaussian CN(0, variance).
    std::complex<double> complex_normal(double variance);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace rissc

#endif
