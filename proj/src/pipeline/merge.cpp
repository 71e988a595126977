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
#include <algorithm>

#include "tdm/error.hpp"
#include "tdm/pipeline/merge.hpp"

namespace tdm::pipeline {

namespace {

PixelRect detection_rect(const Frame& f, const Detection& d) {
  return inner_pixel_rect(clamp_box(d.box, f.width(), f.height()));
}

std::size_t overlap_count(const MaskRaster& m, const PixelRect& r) {
  const PixelRect common = intersect(m.rect(), r);
  std::size_t n = 0;
  for (int y = common.y; y < common.y + common.height; ++y) {
    for (int x = common.x; x < common.x + common.width; ++x) {
      if (m.at(x - m.offset_x, y - m.offset_y) != 0) ++n;
    }
  }
  return n;
}

// Tight mask around the set bits of a frame-sized raster (which has >= 1).
MaskRaster tight_mask(const BinaryRaster& r) {
  int x0 = r.width, y0 = r.height, x1 = -1, y1 = -1;
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (r.at(x, y) == 0) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  MaskRaster m = MaskRaster::filled({x0, y0, x1 - x0 + 1, y1 - y0 + 1}, 0);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      m.bits[static_cast<std::size_t>(y - y0) * m.width + (x - x0)] = r.at(x, y);
    }
  }
  return m;
}

AnnotatedFrame merge_prompted(const Frame& f, const std::vector<Detection>& dets,
                              const std::vector<MaskRaster>& masks) {
  if (masks.size() != dets.size()) {
    throw ValidationError("merge: " + std::to_string(masks.size()) + " masks for " +
                          std::to_string(dets.size()) + " detections");
  }
  AnnotatedFrame af;
  af.frame_id = f.id();
  af.detections = dets;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    masks[i].validate();
    auto clipped = crop_mask(masks[i], detection_rect(f, dets[i]));
    if (!clipped) continue;
    af.masks.push_back(std::move(*clipped));
    af.mask_owner.push_back(i);
  }
  return af;
}

AnnotatedFrame merge_independent(const Frame& f, const std::vector<Detection>& dets,
                                 const std::vector<MaskRaster>& masks) {
  AnnotatedFrame af;
  af.frame_id = f.id();
  af.detections = dets;

  std::vector<PixelRect> rects;
  rects.reserve(dets.size());
  for (const auto& d : dets) rects.push_back(detection_rect(f, d));

  std::vector<std::optional<BinaryRaster>> per_detection(dets.size());
  for (const auto& m : masks) {
    m.validate();
    std::size_t best = 0;
    std::size_t best_k = dets.size();
    for (std::size_t k = 0; k < rects.size(); ++k) {
      const std::size_t n = overlap_count(m, rects[k]);
      if (n > best) {
        best = n;
        best_k = k;
      }
    }
    if (best_k == dets.size()) continue;

    auto& acc = per_detection[best_k];
    if (!acc) acc.emplace(f.width(), f.height());
    const PixelRect visible = intersect(m.rect(), {0, 0, f.width(), f.height()});
    for (int y = visible.y; y < visible.y + visible.height; ++y) {
      for (int x = visible.x; x < visible.x + visible.width; ++x) {
        if (m.at(x - m.offset_x, y - m.offset_y) == 0) continue;
        const bool inside_any = std::any_of(rects.begin(), rects.end(),
                                            [&](const PixelRect& r) { return r.contains(x, y); });
        if (inside_any) acc->at(x, y) = 1;
      }
    }
  }
  for (std::size_t k = 0; k < per_detection.size(); ++k) {
    if (!per_detection[k]) continue;
    af.masks.push_back(tight_mask(*per_detection[k]));
    af.mask_owner.push_back(k);
  }
  return af;
}

}  // namespace

bool AnnotatedFrame::same_content(const AnnotatedFrame& other) const {
  return frame_id == other.frame_id && detections == other.detections &&
         masks == other.masks && mask_owner == other.mask_owner;
}

std::vector<BoundingBox> prompt_boxes(const Frame& f,
                                      const std::vector<Detection>& dets) {
  std::vector<BoundingBox> out;
  out.reserve(dets.size());
  for (const auto& d : dets) out.push_back(clamp_box(d.box, f.width(), f.height()));
  return out;
}

AnnotatedFrame merge(const Frame& f, const std::vector<Detection>& dets,
                     const std::vector<MaskRaster>& masks, Mode mode) {
  return mode == Mode::kParallelIndependent ? merge_independent(f, dets, masks)
                                            : merge_prompted(f, dets, masks);
}

}  // namespace tdm::pipeline
