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
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdm/geometry.hpp"

namespace tdm {

// Immutable 8-bit raster flowing through the pipeline. Samples are row-major
// and interleaved; the buffer length always equals width * height * channels.
class Frame {
 public:
  Frame() = default;
  Frame(std::uint64_t id, double timestamp_ms, int width, int height,
        int channels, std::vector<std::uint8_t> pixels,
        std::string source_tag = {});

  std::uint64_t id() const { return id_; }
  double timestamp_ms() const { return timestamp_ms_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  const std::string& source_tag() const { return source_tag_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  // Same pixels under a different id/timestamp.
  Frame relabeled(std::uint64_t id, double timestamp_ms) const;

  bool operator==(const Frame&) const = default;

 private:
  std::uint64_t id_ = 0;
  double timestamp_ms_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> pixels_;
  std::string source_tag_;
};

// Frame-sized binary raster, one byte (0 or 1) per pixel.
struct BinaryRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryRaster() = default;
  BinaryRaster(int w, int h);

  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t popcount() const;

  bool operator==(const BinaryRaster&) const = default;
};

// ROI-local binary mask placed at (offset_x, offset_y) in frame coordinates.
struct MaskRaster {
  int offset_x = 0;
  int offset_y = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  // Builds a mask of the given rectangle with every bit set to `value`.
  static MaskRaster filled(const PixelRect& rect, std::uint8_t value = 1);

  PixelRect rect() const { return {offset_x, offset_y, width, height}; }
  std::uint8_t at(int local_x, int local_y) const {
    return bits[static_cast<std::size_t>(local_y) * width + local_x];
  }
  std::size_t popcount() const;

  // Throws ValidationError unless dimensions are >= 1 and the bit count
  // matches.
  void validate() const;

  bool operator==(const MaskRaster&) const = default;
};

// Places the mask into a frame-sized raster; bits outside the frame are
// dropped. Throws ValidationError when the mask lies entirely outside.
BinaryRaster mask_to_global(const MaskRaster& m, int frame_w, int frame_h);

// Sub-mask covering `rect` (intersected with the mask's own rectangle), or an
// empty optional when nothing remains.
std::optional<MaskRaster> crop_mask(const MaskRaster& m, const PixelRect& rect);

}  // namespace tdm
