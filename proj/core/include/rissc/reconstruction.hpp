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

#ifndef RISSC_RECONSTRUCTION_HPP
#define RISSC_RECONSTRUCTION_HPP

#include <array>
#include <cstdint>
#include <span>

#include "rissc/semantic_codec.hpp"

namespace rissc {

inline constexpr double kBrokenPartMse = 0.05;
inline constexpr double kBrokenProxyFraction = 0.3;

struct PartQuality {
    std::array<double, 2> score{0.0, 0.0};  // part MSE, or extreme-coefficient fraction
    std::array<bool, 2> bad{false, false};  // indexed by Part
    bool from_reference = true;
};

// Mean squared error over the pixels (all channels) where support is set.
double part_mse(const Image& a, const Image& b, const Mask& support);

// Ground-truth rule: a part is bad when its MSE exceeds 0.05.
PartQuality detect_broken(const Image& decoded, const Image& reference, const Mask& object_mask);

// Blind rule: a part is bad when more than 30% of its supported coefficients
// sit at 0 or 255.
PartQuality detect_broken_blind(std::span<const std::uint8_t> bits_background,
                                std::span<const std::uint8_t> bits_object, const Mask& object_mask);

struct InpaintResult {
    Image image;
    // Set when both parts were bad; the image is then the input unchanged.
    bool both_bad = false;
};

// Bad-part pixels start from the mean of their good 4-neighbours (or of all
// good pixels when none are adjacent), then `sweeps` Jacobi iterations of
// 4-neighbour averaging run with every good pixel held fixed.
InpaintResult inpaint(const Image& decoded, const Mask& object_mask, const PartQuality& quality,
                      int sweeps = 50);

} // namespace rissc

#endif
