// Copyright 2026 The TDM Pipeline Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "tdm/raster.hpp"

#include <algorithm>

#include "tdm/error.hpp"

namespace tdm {

Frame::Frame(std::uint64_t id, double timestamp_ms, int width, int height,
             int channels, std::vector<std::uint8_t> pixels,
             std::string source_tag)
    : id_(id),
      timestamp_ms_(timestamp_ms),
      width_(width),
      height_(height),
      channels_(channels),
      pixels_(std::move(pixels)),
      source_tag_(std::move(source_tag)) {
  if (width < 1 || height < 1) {
    throw ValidationError("frame dimensions must be >= 1");
  }
  if (channels != 1 && channels != 3) {
    throw ValidationError("frame channels must be 1 or 3, got " +
                          std::to_string(channels));
  }
  const auto expected = static_cast<std::size_t>(width) * height * channels;
  if (pixels_.size() != expected) {
    throw ValidationError("frame buffer holds " +
                          std::to_string(pixels_.size()) + " samples, expected " +
                          std::to_string(expected));
  }
}

Frame Frame::relabeled(std::uint64_t id, double timestamp_ms) const {
  Frame copy = *this;
  copy.id_ = id;
  copy.timestamp_ms_ = timestamp_ms;
  return copy;
}

BinaryRaster::BinaryRaster(int w, int h)
    : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

std::size_t BinaryRaster::popcount() const {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

MaskRaster MaskRaster::filled(const PixelRect& rect, std::uint8_t value) {
  MaskRaster m;
  m.offset_x = rect.x;
  m.offset_y = rect.y;
  m.width = rect.width;
  m.height = rect.height;
  m.bits.assign(static_cast<std::size_t>(rect.area()), value);
  return m;
}

std::size_t MaskRaster::popcount() const {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

void MaskRaster::validate() const {
  if (width < 1 || height < 1) {
    throw ValidationError("mask dimensions must be >= 1");
  }
  if (bits.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("mask bit count does not match width*height");
  }
}

BinaryRaster mask_to_global(const MaskRaster& m, int frame_w, int frame_h) {
  m.validate();
  const PixelRect frame{0, 0, frame_w, frame_h};
  const PixelRect visible = intersect(m.rect(), frame);
  if (visible.empty()) {
    throw ValidationError("mask rectangle lies entirely outside the frame");
  }
  BinaryRaster out(frame_w, frame_h);
  for (int y = visible.y; y < visible.y + visible.height; ++y) {
    for (int x = visible.x; x < visible.x + visible.width; ++x) {
      out.at(x, y) = m.at(x - m.offset_x, y - m.offset_y) != 0 ? 1 : 0;
    }
  }
  return out;
}

std::optional<MaskRaster> crop_mask(const MaskRaster& m,
                                    const PixelRect& rect) {
  const PixelRect keep = intersect(m.rect(), rect);
  if (keep.empty()) return std::nullopt;
  MaskRaster out = MaskRaster::filled(keep, 0);
  for (int y = 0; y < keep.height; ++y) {
    for (int x = 0; x < keep.width; ++x) {
      out.bits[static_cast<std::size_t>(y) * keep.width + x] =
          m.at(keep.x + x - m.offset_x, keep.y + y - m.offset_y);
    }
  }
  return out;
}

}  // namespace tdm
