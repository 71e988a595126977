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
#include <chrono>
#include <cmath>
#include <thread>

#include "internal/rng.hpp"
#include "tdm/pipeline/backends.hpp"

namespace tdm::pipeline {

namespace {

constexpr std::uint64_t kDetectSalt = 0xd37ec7;
constexpr std::uint64_t kSegmentSalt = 0x5e9;
constexpr std::uint64_t kSegmentFullSalt = 0x5e9f;
constexpr std::uint64_t kSceneSalt = 0x5cee;
constexpr std::uint64_t kScoreSalt = 0x5c0e;

}  // namespace

double stub_delay_ms(std::uint64_t seed, std::uint64_t frame_id,
                     std::uint64_t salt, double latency_ms, double jitter_ms) {
  if (jitter_ms <= 0.0) return std::max(0.0, latency_ms);
  auto rng = internal::keyed_rng(seed, frame_id, salt);
  const double u = 2.0 * internal::uniform_unit(rng) - 1.0;
  return std::max(0.0, latency_ms + jitter_ms * u);
}

void hold_for_ms(double ms) {
  if (!(ms > 0.0)) return;
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double, std::milli>(ms));
  std::this_thread::sleep_until(deadline);
}

std::vector<BoundingBox> synthetic_scene(std::uint64_t seed,
                                         std::uint64_t frame_id, int width,
                                         int height) {
  auto rng = internal::keyed_rng(seed, frame_id, kSceneSalt);
  const int count = internal::uniform_int(rng, 1, 3);
  std::vector<BoundingBox> boxes;
  boxes.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int bw_lo = std::max(1, std::min(width, std::max(2, width / 8)));
    const int bw_hi = std::max(bw_lo, std::min(width, width / 3));
    const int bh_lo = std::max(1, std::min(height, std::max(2, height / 8)));
    const int bh_hi = std::max(bh_lo, std::min(height, height / 3));
    const int bw = internal::uniform_int(rng, bw_lo, bw_hi);
    const int bh = internal::uniform_int(rng, bh_lo, bh_hi);
    const int x = internal::uniform_int(rng, 0, width - bw);
    const int y = internal::uniform_int(rng, 0, height - bh);
    boxes.push_back({static_cast<double>(x), static_cast<double>(y),
                     static_cast<double>(x + bw), static_cast<double>(y + bh)});
  }
  return boxes;
}

std::vector<Detection> StubDetector::detect(const Frame& f) {
  hold_for_ms(stub_delay_ms(seed_, f.id(), kDetectSalt, latency_ms_, jitter_ms_));
  auto rng = internal::keyed_rng(seed_, f.id(), kScoreSalt);
  std::vector<Detection> out;
  for (const auto& box : synthetic_scene(seed_, f.id(), f.width(), f.height())) {
    const double score = static_cast<double>(internal::uniform_int(rng, 1, 1000)) / 1000.0;
    out.push_back({box, score, 0});
  }
  return out;
}

std::vector<MaskRaster> StubSegmenter::segment(const Frame& f,
                                               const std::vector<BoundingBox>& boxes) {
  hold_for_ms(stub_delay_ms(seed_, f.id(), kSegmentSalt, latency_ms_, jitter_ms_));
  std::vector<MaskRaster> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) {
    const BoundingBox roi = clamp_box(b, f.width(), f.height());
    const PixelRect rect = inner_pixel_rect(roi);
    if (!rect.empty()) {
      out.push_back(MaskRaster::filled(rect, 1));
    } else {
      // Sub-pixel prompt: nothing to segment, keep the one-mask-per-box shape.
      const int x = std::clamp(static_cast<int>(std::floor(roi.x_min)), 0, f.width() - 1);
      const int y = std::clamp(static_cast<int>(std::floor(roi.y_min)), 0, f.height() - 1);
      out.push_back(MaskRaster::filled({x, y, 1, 1}, 0));
    }
  }
  return out;
}

std::vector<MaskRaster> StubSegmenter::segment_full(const Frame& f) {
  hold_for_ms(stub_delay_ms(seed_, f.id(), kSegmentFullSalt, latency_ms_, jitter_ms_));
  const PixelRect frame{0, 0, f.width(), f.height()};
  std::vector<MaskRaster> out;
  for (const auto& b : synthetic_scene(seed_, f.id(), f.width(), f.height())) {
    const PixelRect r = inner_pixel_rect(b);
    const PixelRect grown = intersect({r.x - 2, r.y - 2, r.width + 4, r.height + 4}, frame);
    if (!grown.empty()) out.push_back(MaskRaster::filled(grown, 1));
  }
  auto rng = internal::keyed_rng(seed_, f.id(), kSegmentFullSalt);
  const int side = std::max(1, std::min(f.width(), f.height()) / 10);
  const int x = internal::uniform_int(rng, 0, std::max(0, f.width() - side));
  const int y = internal::uniform_int(rng, 0, std::max(0, f.height() - side));
  const PixelRect blob = intersect({x, y, side, side}, frame);
  if (!blob.empty()) out.push_back(MaskRaster::filled(blob, 1));
  return out;
}

}  // namespace tdm::pipeline
