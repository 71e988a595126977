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
#include <array>

#include "tdm/error.hpp"
#include "tdm/pipeline/merge.hpp"

namespace tdm::pipeline {

Rgb palette_color(std::size_t index) {
  static constexpr std::array<Rgb, 8> kPalette = {{
      {230, 25, 75},  {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
      {245, 130, 48}, {145, 30, 180}, {70, 240, 240}, {240, 50, 230},
  }};
  return kPalette[index % kPalette.size()];
}

Frame render_overlay(const AnnotatedFrame& af, const Frame& f) {
  if (af.frame_id != f.id()) {
    throw ValidationError("render_overlay: annotations for frame " +
                          std::to_string(af.frame_id) + " applied to frame " +
                          std::to_string(f.id()));
  }
  if (af.masks.size() != af.mask_owner.size()) {
    throw ValidationError("render_overlay: mask owner list does not match masks");
  }
  const int w = f.width();
  const int h = f.height();
  const PixelRect frame{0, 0, w, h};

  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      for (int c = 0; c < 3; ++c) rgb[o + c] = f.at(x, y, f.channels() == 3 ? c : 0);
    }
  }
  auto paint = [&](int x, int y, Rgb color, bool blend) {
    const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
    const std::uint8_t col[3] = {color.r, color.g, color.b};
    for (int c = 0; c < 3; ++c) {
      rgb[o + c] = blend ? static_cast<std::uint8_t>((rgb[o + c] + col[c] + 1) / 2)
                         : col[c];
    }
  };

  for (std::size_t i = 0; i < af.masks.size(); ++i) {
    const MaskRaster& m = af.masks[i];
    m.validate();
    if (!(intersect(m.rect(), frame) == m.rect())) {
      throw ValidationError("render_overlay: mask extends beyond the frame");
    }
    const Rgb color = palette_color(af.mask_owner[i]);
    for (int y = 0; y < m.height; ++y) {
      for (int x = 0; x < m.width; ++x) {
        if (m.at(x, y) != 0) paint(m.offset_x + x, m.offset_y + y, color, true);
      }
    }
  }

  for (std::size_t k = 0; k < af.detections.size(); ++k) {
    const PixelRect r = inner_pixel_rect(clamp_box(af.detections[k].box, w, h));
    if (r.empty()) continue;
    const Rgb color = palette_color(k);
    for (int x = r.x; x < r.x + r.width; ++x) {
      paint(x, r.y, color, false);
      paint(x, r.y + r.height - 1, color, false);
    }
    for (int y = r.y; y < r.y + r.height; ++y) {
      paint(r.x, y, color, false);
      paint(r.x + r.width - 1, y, color, false);
    }
  }
  return Frame(f.id(), f.timestamp_ms(), w, h, 3, std::move(rgb), f.source_tag());
}

}  // namespace tdm::pipeline
