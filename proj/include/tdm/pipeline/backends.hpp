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
#include <vector>

#include "tdm/geometry.hpp"
#include "tdm/raster.hpp"

namespace tdm::pipeline {

// Stage-1 backend. Implementations are only ever called from one worker at a
// time; they need not be reentrant.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const Frame& f) = 0;
};

// Stage-2 backend.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  // One ROI-local mask per prompt box, in prompt order.
  virtual std::vector<MaskRaster> segment(const Frame& f,
                                          const std::vector<BoundingBox>& boxes) = 0;
  // Promptless segmentation of the whole frame.
  virtual std::vector<MaskRaster> segment_full(const Frame& f) = 0;
};

// Simulated inference delay: latency_ms shifted by a uniform offset in
// [-jitter_ms, +jitter_ms] derived from (seed, frame id, salt). Never
// negative.
double stub_delay_ms(std::uint64_t seed, std::uint64_t frame_id,
                     std::uint64_t salt, double latency_ms, double jitter_ms);

// Blocks the calling thread for `ms` milliseconds on the steady clock.
void hold_for_ms(double ms);

// Object rectangles the stub backends agree on for a given (seed, frame):
// 1 to 3 integer boxes inside a width x height frame.
std::vector<BoundingBox> synthetic_scene(std::uint64_t seed,
                                         std::uint64_t frame_id, int width,
                                         int height);

// Stands in for the detector network: sleeps, then reports the synthetic
// scene with scores in (0, 1]. Output depends only on (seed, frame id, size).
class StubDetector : public Detector {
 public:
  StubDetector(std::uint64_t seed, double latency_ms, double jitter_ms = 0.0)
      : seed_(seed), latency_ms_(latency_ms), jitter_ms_(jitter_ms) {}

  std::vector<Detection> detect(const Frame& f) override;

 private:
  std::uint64_t seed_;
  double latency_ms_;
  double jitter_ms_;
};

// Stands in for the box-prompted segmenter: sleeps once per call, then
// returns the filled pixel rectangle of each clamped prompt box.
class StubSegmenter : public Segmenter {
 public:
  StubSegmenter(std::uint64_t seed, double latency_ms, double jitter_ms = 0.0)
      : seed_(seed), latency_ms_(latency_ms), jitter_ms_(jitter_ms) {}

  std::vector<MaskRaster> segment(const Frame& f,
                                  const std::vector<BoundingBox>& boxes) override;

  // Scene objects dilated by two pixels plus one distractor blob.
  std::vector<MaskRaster> segment_full(const Frame& f) override;

 private:
  std::uint64_t seed_;
  double latency_ms_;
  double jitter_ms_;
};

}  // namespace tdm::pipeline
