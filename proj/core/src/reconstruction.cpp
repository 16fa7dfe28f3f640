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

#include "rissc/reconstruction.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rissc {

double part_mse(const Image& a, const Image& b, const Mask& support)
{
    if (a.data.size() != b.data.size() || a.height != b.height || a.width != b.width)
        throw std::invalid_argument("part_mse: dimension mismatch");
    if (support.size() != static_cast<size_t>(a.height) * a.width)
        throw std::invalid_argument("part_mse: mask size mismatch");
    double acc = 0.0;
    long n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            if (!support[static_cast<size_t>(y) * a.width + x])
                continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = a.at(y, x, c) - b.at(y, x, c);
                acc += d * d;
                ++n;
            }
        }
    return n ? acc / n : 0.0;
}

PartQuality detect_broken(const Image& decoded, const Image& reference, const Mask& object_mask)
{
    PartQuality q;
    q.score[kObject] = part_mse(decoded, reference, object_mask);
    q.score[kBackground] = part_mse(decoded, reference, complement(object_mask));
    for (int p : {kBackground, kObject})
        q.bad[p] = q.score[p] > kBrokenPartMse;
    return q;
}

PartQuality detect_broken_blind(std::span<const std::uint8_t> bits_background,
                                std::span<const std::uint8_t> bits_object, const Mask& object_mask)
{
    PartQuality q;
    q.from_reference = false;
    const std::array<Mask, 2> support{complement(object_mask), object_mask};
    const std::array<std::span<const std::uint8_t>, 2> bits{bits_background, bits_object};
    for (int p : {kBackground, kObject}) {
        const auto used = coefficient_support(support[p]);
        const auto coef = unpack_coefficients(bits[p]);
        int n = 0, extreme = 0;
        for (int i = 0; i < kCoefficientsPerPart; ++i) {
            if (!used[i])
                continue;
            ++n;
            extreme += coef[i] == 0 || coef[i] == 255;
        }
        q.score[p] = n ? static_cast<double>(extreme) / n : 0.0;
        q.bad[p] = q.score[p] > kBrokenProxyFraction;
    }
    return q;
}

InpaintResult inpaint(const Image& decoded, const Mask& object_mask, const PartQuality& quality,
                      int sweeps)
{
    const int H = decoded.height, W = decoded.width, C = decoded.channels;
    if (object_mask.size() != static_cast<size_t>(H) * W)
        throw std::invalid_argument("inpaint: mask size mismatch");
    if (sweeps < 0)
        throw std::invalid_argument("inpaint: sweeps must be non-negative");
    InpaintResult out{decoded, false};
    if (quality.bad[kBackground] && quality.bad[kObject]) {
        out.both_bad = true;
        return out;
    }
    if (!quality.bad[kBackground] && !quality.bad[kObject])
        return out;

    const bool object_bad = quality.bad[kObject];
    std::vector<std::uint8_t> hole(static_cast<size_t>(H) * W);
    for (size_t i = 0; i < hole.size(); ++i)
        hole[i] = (object_mask[i] != 0) == object_bad;

    constexpr int dy[4] = {-1, 1, 0, 0};
    constexpr int dx[4] = {0, 0, -1, 1};
    Image& img = out.image;
    for (int c = 0; c < C; ++c) {
        double good_sum = 0.0;
        long good_n = 0;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (!hole[static_cast<size_t>(y) * W + x]) {
                    good_sum += decoded.at(y, x, c);
                    ++good_n;
                }
        const double good_mean = good_n ? good_sum / good_n : 0.5;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                if (!hole[static_cast<size_t>(y) * W + x])
                    continue;
                double s = 0.0;
                int n = 0;
                for (int k = 0; k < 4; ++k) {
                    const int yy = y + dy[k], xx = x + dx[k];
                    if (yy < 0 || yy >= H || xx < 0 || xx >= W || hole[static_cast<size_t>(yy) * W + xx])
                        continue;
                    s += decoded.at(yy, xx, c);
                    ++n;
                }
                img.at(y, x, c) = n ? s / n : good_mean;
            }
    }

    Image next = img;
    for (int it = 0; it < sweeps; ++it) {
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                if (!hole[static_cast<size_t>(y) * W + x])
                    continue;
                for (int c = 0; c < C; ++c) {
                    double s = 0.0;
                    int n = 0;
                    for (int k = 0; k < 4; ++k) {
                        const int yy = y + dy[k], xx = x + dx[k];
                        if (yy < 0 || yy >= H || xx < 0 || xx >= W)
                            continue;
                        s += img.at(yy, xx, c);
                        ++n;
                    }
                    next.at(y, x, c) = s / n;
                }
            }
        std::swap(img, next);
    }
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            if (hole[static_cast<size_t>(y) * W + x])
                for (int c = 0; c < C; ++c)
                    img.at(y, x, c) = std::clamp(img.at(y, x, c), 0.0, 1.0);
    return out;
}

} // namespace rissc
