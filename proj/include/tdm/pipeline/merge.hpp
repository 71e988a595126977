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
#include <vector>

#include "tdm/geometry.hpp"
#include "tdm/raster.hpp"

namespace tdm::pipeline {

enum class Mode { kSequential, kPipelined, kParallelIndependent };

// Frame after both stages have been combined. mask_owner[i] is the index of
// the detection that masks[i] belongs to; owners are strictly ascending.
struct AnnotatedFrame {
  std::uint64_t frame_id = 0;
  std::vector<Detection> detections;
  std::vector<MaskRaster> masks;
  std::vector<std::size_t> mask_owner;
  std::optional<Frame> overlay;

  // Compares detections and masks only.
  bool same_content(const AnnotatedFrame& other) const;
};

// Combines one frame's detector and segmenter outputs.
//
// Box-prompted modes pair masks with detections index-for-index and clip each
// mask to its detection's clamped box. kParallelIndependent assigns each
// promptless mask to the detection it overlaps most, clears pixels outside
// every detection box and ORs masks landing on the same detection.
// Throws ValidationError when box-prompted counts differ.
AnnotatedFrame merge(const Frame& f, const std::vector<Detection>& dets,
                     const std::vector<MaskRaster>& masks, Mode mode);

// Detection boxes clamped to the frame, as handed to the segmenter.
std::vector<BoundingBox> prompt_boxes(const Frame& f,
                                      const std::vector<Detection>& dets);

// RGB copy of the frame with masks blended at 50% and 1-pixel box outlines,
// both colored from a fixed per-detection palette.
Frame render_overlay(const AnnotatedFrame& af, const Frame& f);

struct Rgb {
  std::uint8_t r, g, b;
};
Rgb palette_color(std::size_t index);

}  // namespace tdm::pipeline
