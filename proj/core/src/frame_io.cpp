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

#include <bit>
#include <cstring>
#include <stdexcept>

#include "rissc/semantic_codec.hpp"

static_assert(std::endian::native == std::endian::little,
              "frame serialization assumes a little-endian host");

namespace rissc {

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value)
{
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T take(std::span<const std::uint8_t> bytes, size_t& pos)
{
    if (pos + sizeof(T) > bytes.size())
        throw std::invalid_argument("deserialize_frame: truncated input");
    T value;
    std::memcpy(&value, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

} // namespace

std::vector<std::uint8_t> serialize_frame(const SemanticFrame& frame)
{
    const Image& img = frame.image;
    std::vector<std::uint8_t> out;
    put<std::int32_t>(out, img.height);
    put<std::int32_t>(out, img.width);
    put<std::int32_t>(out, img.channels);
    put<std::int32_t>(out, frame.class_label);
    for (double v : img.data)
        put<double>(out, v);
    out.insert(out.end(), frame.object_mask.begin(), frame.object_mask.end());
    for (const auto& bits : frame.bits) {
        if (static_cast<int>(bits.size()) != kBitsPerPart)
            throw std::invalid_argument("serialize_frame: frame is not encoded");
        for (int i = 0; i < kBitsPerPart; i += 8) {
            std::uint8_t byte = 0;
            for (int b = 0; b < 8; ++b)
                byte = static_cast<std::uint8_t>((byte << 1) | (bits[i + b] & 1));
            out.push_back(byte);
        }
    }
    return out;
}

SemanticFrame deserialize_frame(std::span<const std::uint8_t> bytes)
{
    size_t pos = 0;
    const int h = take<std::int32_t>(bytes, pos);
    const int w = take<std::int32_t>(bytes, pos);
    const int c = take<std::int32_t>(bytes, pos);
    if (h != kImageSize || w != kImageSize || c != kImageChannels)
        throw std::invalid_argument("deserialize_frame: unsupported image dimensions");
    SemanticFrame f;
    f.class_label = take<std::int32_t>(bytes, pos);
    f.image = Image::zeros(h, w, c);
    for (double& v : f.image.data)
        v = take<double>(bytes, pos);
    const size_t n_pix = static_cast<size_t>(h) * w;
    if (pos + n_pix + 2 * kBitsPerPart / 8 != bytes.size())
        throw std::invalid_argument("deserialize_frame: unexpected payload size");
    f.object_mask.assign(bytes.begin() + pos, bytes.begin() + pos + n_pix);
    pos += n_pix;
    for (auto& bits : f.bits) {
        bits.resize(kBitsPerPart);
        for (int i = 0; i < kBitsPerPart; i += 8) {
            const std::uint8_t byte = bytes[pos++];
            for (int b = 0; b < 8; ++b)
                bits[i + b] = static_cast<std::uint8_t>((byte >> (7 - b)) & 1);
        }
    }
    auto parts = segment(f.image, f.object_mask);
    f.background = std::move(parts[kBackground]);
    f.object = std::move(parts[kObject]);
    return f;
}

} // namespace rissc
