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

#ifndef RISSC_SEMANTIC_CODEC_HPP
#define RISSC_SEMANTIC_CODEC_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rissc/mimo_ofdm.hpp"
#include "rissc/random.hpp"

namespace rissc {

inline constexpr int kImageSize = 32;
inline constexpr int kImageChannels = 3;
inline constexpr int kNumClasses = 10;
inline constexpr int kStencilCells = 8;   // stencil design grid
inline constexpr int kStencilPixels = 16; // placed size (each cell is 2x2 pixels)
inline constexpr int kCoefficientsPerPart = 256;

struct Image {
    int height = kImageSize;
    int width = kImageSize;
    int channels = kImageChannels;
    std::vector<double> data;  // [y][x][c]

    static Image zeros(int height = kImageSize, int width = kImageSize, int channels = kImageChannels);

    double& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
    double at(int y, int x, int c) const
    {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    friend bool operator==(const Image&, const Image&) = default;
};

using Mask = std::vector<std::uint8_t>;  // [y][x], nonzero = object

struct MaskedImage {
    Image pixels;  // zero outside the support
    Mask support;
};

struct SemanticFrame {
    Image image;
    Mask object_mask;
    int class_label = 0;
    MaskedImage background;
    MaskedImage object;
    std::array<BitVector, 2> bits;  // indexed by Part
};

// The ten binary class templates on the 8x8 design grid, row-major.
const std::array<std::array<std::uint8_t, kStencilCells * kStencilCells>, kNumClasses>& stencils();

// Synthetic source: smooth background field plus the class stencil (upsampled
// to 16x16) at a random offset, filled with the class colour and mild noise.
// The returned frame is already segmented and encoded.
SemanticFrame generate_source(RandomStream& rng, int class_label);

std::array<MaskedImage, 2> segment(const Image& image, const Mask& mask);

// 256 cell means over the bounding box of the part's support, each quantised
// to 8 bits (MSB first). Layout: G on an 8x16 grid, then R on 8x8, then B on
// 8x8, all row-major. A cell with no supported pixel codes as 0.
BitVector encode_part(const MaskedImage& part);

// Inverse of encode_part over the bounding box of `support`; pixels outside
// the box are zero. Pixels inside the box but outside the support still take
// their cell's value, which is what the classifier reads.
Image decode_part(std::span<const std::uint8_t> bits, const Mask& support);

// Both parts decoded and recombined through the object mask, clamped to [0,1].
Image decode_frame(std::span<const std::uint8_t> bits_background,
                   std::span<const std::uint8_t> bits_object, const Mask& object_mask);

Mask complement(const Mask& mask);

// Which of the 256 coefficients cover at least one supported pixel.
std::array<bool, kCoefficientsPerPart> coefficient_support(const Mask& support);

// Quantised coefficient values (0..255) carried by a 2048-bit codeword.
std::array<int, kCoefficientsPerPart> unpack_coefficients(std::span<const std::uint8_t> bits);

struct Classification {
    int label = -1;
    bool correct = false;
};

// Nearest-template classifier on a decoded object part. The window is the
// bounding box of the object mask sampled on a 16x16 grid; a sample is set
// when all of its channels fall inside the object colour band [0.3, 0.7].
// The binary grid is matched to the upsampled stencils by Hamming distance
// (lowest index wins ties).
Classification classify(const Image& object_part, const Mask& object_mask, int true_label = -1);

double frame_mse(const Image& a, const Image& b);

BitVector random_bits(int n, RandomStream& rng);

// Flat little-endian layout: int32 H, W, C, label; float64 image; uint8 mask;
// background bits then object bits, packed MSB first.
std::vector<std::uint8_t> serialize_frame(const SemanticFrame& frame);
SemanticFrame deserialize_frame(std::span<const std::uint8_t> bytes);

} // namespace rissc

#endif
