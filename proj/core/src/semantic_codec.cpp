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

#include "rissc/semantic_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace rissc {

namespace {

// A decoded pixel counts as object when every channel lies in the band
// spanned by the class colours.
constexpr double kObjectBandLow = 0.3;
constexpr double kObjectBandHigh = 0.7;

using StencilGrid = std::array<std::uint8_t, kStencilCells * kStencilCells>;

StencilGrid parse_stencil(const std::array<std::string_view, kStencilCells>& rows)
{
    StencilGrid g{};
    for (int r = 0; r < kStencilCells; ++r)
        for (int c = 0; c < kStencilCells; ++c)
            g[r * kStencilCells + c] = rows[r][c] == '#';
    return g;
}

// Class colours, one RGB triple per label.
constexpr std::array<std::array<double, 3>, kNumClasses> kClassColour{{
    {0.62, 0.40, 0.38},
    {0.38, 0.60, 0.42},
    {0.40, 0.42, 0.63},
    {0.60, 0.58, 0.36},
    {0.58, 0.37, 0.60},
    {0.36, 0.58, 0.61},
    {0.50, 0.45, 0.40},
    {0.45, 0.52, 0.56},
    {0.55, 0.50, 0.47},
    {0.42, 0.48, 0.52},
}};

struct Box {
    int y0 = 0, x0 = 0, h = 0, w = 0;
    bool empty() const { return h == 0 || w == 0; }
};

Box bounding_box(const Mask& support, int height, int width)
{
    int y_min = height, y_max = -1, x_min = width, x_max = -1;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (support[static_cast<size_t>(y) * width + x]) {
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
    if (y_max < 0)
        return {};
    return {y_min, x_min, y_max - y_min + 1, x_max - x_min + 1};
}

// Coefficient planes: channel, grid columns, offset into the coefficient list.
struct Plane {
    int channel;
    int cols;
    int offset;
};
constexpr std::array<Plane, 3> kPlanes{{{1, 16, 0}, {0, 8, 128}, {2, 8, 192}}};
constexpr int kGridRows = 8;

int coefficient_index(const Plane& p, const Box& box, int y, int x)
{
    const int cy = (y - box.y0) * kGridRows / box.h;
    const int cx = (x - box.x0) * p.cols / box.w;
    return p.offset + cy * p.cols + cx;
}

void check_mask(const Mask& mask, int height, int width)
{
    if (mask.size() != static_cast<size_t>(height) * width)
        throw std::invalid_argument("mask size does not match the image");
}

} // namespace

Image Image::zeros(int height, int width, int channels)
{
    if (height <= 0 || width <= 0 || channels <= 0)
        throw std::invalid_argument("Image: dimensions must be positive");
    Image img;
    img.height = height;
    img.width = width;
    img.channels = channels;
    img.data.assign(static_cast<size_t>(height) * width * channels, 0.0);
    return img;
}

const std::array<StencilGrid, kNumClasses>& stencils()
{
    static const std::array<StencilGrid, kNumClasses> table{
        parse_stencil({"########", "########", "##....##", "##....##", "##....##", "##....##", "########", "########"}),
        parse_stencil({"...##...", "...##...", "...##...", "########", "########", "...##...", "...##...", "...##..."}),
        parse_stencil({"##....##", ".##..##.", "..####..", "...##...", "...##...", "..####..", ".##..##.", "##....##"}),
        parse_stencil({"...##...", "..####..", ".##..##.", "##....##", "##....##", ".##..##.", "..####..", "...##..."}),
        parse_stencil({"########", "........", "........", "########", "########", "........", "........", "########"}),
        parse_stencil({"#..##..#", "#..##..#", "#..##..#", "#..##..#", "#..##..#", "#..##..#", "#..##..#", "#..##..#"}),
        parse_stencil({"########", ".#######", "..######", "...#####", "....####", ".....###", "......##", ".......#"}),
        parse_stencil({"##..##..", "##..##..", "..##..##", "..##..##", "##..##..", "##..##..", "..##..##", "..##..##"}),
        parse_stencil({"########", "########", "...##...", "...##...", "...##...", "...##...", "...##...", "...##..."}),
        parse_stencil({"##......", "##......", "##......", "##......", "##......", "##......", "########", "########"}),
    };
    return table;
}

SemanticFrame generate_source(RandomStream& rng, int class_label)
{
    if (class_label < 0 || class_label >= kNumClasses)
        throw std::invalid_argument("generate_source: class label must be in [0, 9]");
    constexpr int N = kImageSize;
    SemanticFrame f;
    f.class_label = class_label;
    f.image = Image::zeros();

    // Background: three low-frequency cosines per channel around mid grey.
    for (int c = 0; c < kImageChannels; ++c) {
        std::array<double, 3> amp{}, fy{}, fx{}, ph{};
        for (int t = 0; t < 3; ++t) {
            amp[t] = 0.05 + 0.07 * rng.uniform();
            fy[t] = rng.uniform_int(3);
            fx[t] = rng.uniform_int(3);
            ph[t] = 2.0 * std::numbers::pi * rng.uniform();
        }
        for (int y = 0; y < N; ++y)
            for (int x = 0; x < N; ++x) {
                double v = 0.5;
                for (int t = 0; t < 3; ++t)
                    v += amp[t] * std::cos(2.0 * std::numbers::pi * (fy[t] * y + fx[t] * x) / N + ph[t]);
                f.image.at(y, x, c) = std::clamp(v, 0.0, 1.0);
            }
    }

    const int oy = rng.uniform_int(N - kStencilPixels + 1);
    const int ox = rng.uniform_int(N - kStencilPixels + 1);
    const auto& st = stencils()[class_label];
    const auto& colour = kClassColour[class_label];
    f.object_mask.assign(static_cast<size_t>(N) * N, 0);
    for (int y = 0; y < kStencilPixels; ++y)
        for (int x = 0; x < kStencilPixels; ++x) {
            if (!st[(y / 2) * kStencilCells + x / 2])
                continue;
            f.object_mask[static_cast<size_t>(oy + y) * N + ox + x] = 1;
            for (int c = 0; c < kImageChannels; ++c)
                f.image.at(oy + y, ox + x, c) = std::clamp(colour[c] + 0.02 * rng.normal(), 0.0, 1.0);
        }

    auto parts = segment(f.image, f.object_mask);
    f.background = std::move(parts[kBackground]);
    f.object = std::move(parts[kObject]);
    f.bits[kBackground] = encode_part(f.background);
    f.bits[kObject] = encode_part(f.object);
    return f;
}

Mask complement(const Mask& mask)
{
    Mask out(mask.size());
    for (size_t i = 0; i < mask.size(); ++i)
        out[i] = mask[i] ? 0 : 1;
    return out;
}

std::array<MaskedImage, 2> segment(const Image& image, const Mask& mask)
{
    check_mask(mask, image.height, image.width);
    std::array<MaskedImage, 2> parts;
    parts[kObject].support = mask;
    for (auto& m : parts[kObject].support)
        m = m ? 1 : 0;
    parts[kBackground].support = complement(mask);
    for (int p : {kBackground, kObject}) {
        parts[p].pixels = Image::zeros(image.height, image.width, image.channels);
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x) {
                if (!parts[p].support[static_cast<size_t>(y) * image.width + x])
                    continue;
                for (int c = 0; c < image.channels; ++c)
                    parts[p].pixels.at(y, x, c) = image.at(y, x, c);
            }
    }
    return parts;
}

BitVector encode_part(const MaskedImage& part)
{
    const Image& img = part.pixels;
    if (img.channels != kImageChannels)
        throw std::invalid_argument("encode_part: expected a three-channel image");
    check_mask(part.support, img.height, img.width);
    BitVector bits(kBitsPerPart, 0);
    const Box box = bounding_box(part.support, img.height, img.width);
    if (box.empty())
        return bits;

    std::array<double, kCoefficientsPerPart> sum{};
    std::array<int, kCoefficientsPerPart> count{};
    for (int y = box.y0; y < box.y0 + box.h; ++y)
        for (int x = box.x0; x < box.x0 + box.w; ++x) {
            if (!part.support[static_cast<size_t>(y) * img.width + x])
                continue;
            for (const auto& p : kPlanes) {
                const int idx = coefficient_index(p, box, y, x);
                sum[idx] += img.at(y, x, p.channel);
                ++count[idx];
            }
        }
    for (int n = 0; n < kCoefficientsPerPart; ++n) {
        const double v = count[n] ? std::clamp(sum[n] / count[n], 0.0, 1.0) : 0.0;
        const int q = static_cast<int>(std::lround(v * 255.0));
        for (int b = 0; b < 8; ++b)
            bits[n * 8 + b] = static_cast<std::uint8_t>((q >> (7 - b)) & 1);
    }
    return bits;
}

std::array<bool, kCoefficientsPerPart> coefficient_support(const Mask& support)
{
    check_mask(support, kImageSize, kImageSize);
    std::array<bool, kCoefficientsPerPart> out{};
    const Box box = bounding_box(support, kImageSize, kImageSize);
    for (int y = box.y0; y < box.y0 + box.h; ++y)
        for (int x = box.x0; x < box.x0 + box.w; ++x)
            if (support[static_cast<size_t>(y) * kImageSize + x])
                for (const auto& p : kPlanes)
                    out[coefficient_index(p, box, y, x)] = true;
    return out;
}

std::array<int, kCoefficientsPerPart> unpack_coefficients(std::span<const std::uint8_t> bits)
{
    if (static_cast<int>(bits.size()) != kBitsPerPart)
        throw std::invalid_argument("unpack_coefficients: each part must carry 2048 bits");
    std::array<int, kCoefficientsPerPart> q{};
    for (int n = 0; n < kCoefficientsPerPart; ++n)
        for (int b = 0; b < 8; ++b)
            q[n] = (q[n] << 1) | (bits[n * 8 + b] & 1);
    return q;
}

Image decode_part(std::span<const std::uint8_t> bits, const Mask& support)
{
    if (static_cast<int>(bits.size()) != kBitsPerPart)
        throw std::invalid_argument("decode_part: each part must carry 2048 bits");
    check_mask(support, kImageSize, kImageSize);
    Image img = Image::zeros();
    const Box box = bounding_box(support, kImageSize, kImageSize);
    if (box.empty())
        return img;
    const auto q = unpack_coefficients(bits);
    std::array<double, kCoefficientsPerPart> coef{};
    for (int n = 0; n < kCoefficientsPerPart; ++n)
        coef[n] = q[n] / 255.0;
    for (int y = box.y0; y < box.y0 + box.h; ++y)
        for (int x = box.x0; x < box.x0 + box.w; ++x)
            for (const auto& p : kPlanes)
                img.at(y, x, p.channel) = coef[coefficient_index(p, box, y, x)];
    return img;
}

Image decode_frame(std::span<const std::uint8_t> bits_background,
                   std::span<const std::uint8_t> bits_object, const Mask& object_mask)
{
    const Image bg = decode_part(bits_background, complement(object_mask));
    const Image obj = decode_part(bits_object, object_mask);
    Image out = Image::zeros();
    for (int y = 0; y < kImageSize; ++y)
        for (int x = 0; x < kImageSize; ++x) {
            const Image& src = object_mask[static_cast<size_t>(y) * kImageSize + x] ? obj : bg;
            for (int c = 0; c < kImageChannels; ++c)
                out.at(y, x, c) = std::clamp(src.at(y, x, c), 0.0, 1.0);
        }
    return out;
}

Classification classify(const Image& object_part, const Mask& object_mask, int true_label)
{
    check_mask(object_mask, object_part.height, object_part.width);
    Classification out;
    const Box box = bounding_box(object_mask, object_part.height, object_part.width);
    std::array<bool, kStencilPixels * kStencilPixels> on{};
    if (!box.empty()) {
        for (int gy = 0; gy < kStencilPixels; ++gy)
            for (int gx = 0; gx < kStencilPixels; ++gx) {
                const int y = box.y0 + gy * box.h / kStencilPixels;
                const int x = box.x0 + gx * box.w / kStencilPixels;
                bool inside = true;
                for (int c = 0; c < object_part.channels; ++c) {
                    const double v = object_part.at(y, x, c);
                    inside = inside && v >= kObjectBandLow && v <= kObjectBandHigh;
                }
                on[gy * kStencilPixels + gx] = inside;
            }
    }
    int best = -1;
    int best_distance = 0;
    for (int k = 0; k < kNumClasses; ++k) {
        const auto& st = stencils()[k];
        int d = 0;
        for (int gy = 0; gy < kStencilPixels; ++gy)
            for (int gx = 0; gx < kStencilPixels; ++gx)
                d += on[gy * kStencilPixels + gx] != static_cast<bool>(st[(gy / 2) * kStencilCells + gx / 2]);
        if (best < 0 || d < best_distance) {
            best = k;
            best_distance = d;
        }
    }
    out.label = best;
    out.correct = best == true_label;
    return out;
}

double frame_mse(const Image& a, const Image& b)
{
    if (a.height != b.height || a.width != b.width || a.channels != b.channels ||
        a.data.size() != b.data.size())
        throw std::invalid_argument("frame_mse: dimension mismatch");
    if (a.data.empty())
        return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.data.size());
}

BitVector random_bits(int n, RandomStream& rng)
{
    BitVector bits(n);
    for (int i = 0; i < n; i += 64) {
        const std::uint64_t w = rng.next_u64();
        for (int b = 0; b < 64 && i + b < n; ++b)
            bits[i + b] = static_cast<std::uint8_t>((w >> b) & 1u);
    }
    return bits;
}

} // namespace rissc
