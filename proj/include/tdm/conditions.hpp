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

#include <optional>
#include <string>
#include <vector>

#include "tdm/manifest.hpp"
#include "tdm/metrics.hpp"
#include "tdm/raster.hpp"

namespace tdm::conditions {

enum class SmallObjectRule { kAny, kAll };

struct ConditionThresholds {
  double blur_laplacian_var = 50.0;
  double dark_mean = 40.0;
  double bright_mean = 200.0;
  double small_object_area_frac = 0.02;
  double occlusion_iou = 0.5;
  SmallObjectRule small_object_rule = SmallObjectRule::kAny;

  // Throws ValidationError when the ordering/range invariants fail.
  void validate() const;
};

enum class Exposure { kUnderexposed, kNormal, kOverexposed };

// Luma 0.299 R + 0.587 G + 0.114 B rounded to nearest; 1-channel frames are
// returned unchanged.
Frame to_grayscale(const Frame& f);

// Population variance of the 4-neighbour Laplacian over interior pixels.
// Throws ValidationError for non-grayscale input or images smaller than 3x3.
double laplacian_variance(const Frame& gray);

double mean_intensity(const Frame& gray);

Exposure exposure_class(const Frame& gray, const ConditionThresholds& t);

bool small_object_flag(const std::vector<BoundingBox>& gt_boxes, int image_w,
                       int image_h, const ConditionThresholds& t);

// True when two distinct ground-truth boxes overlap with IoU strictly above
// the threshold.
bool occlusion_flag(const std::vector<BoundingBox>& gt_boxes,
                    const ConditionThresholds& t);

// Throws ValidationError when the frame does not match the record size.
ConditionTags categorize(const Frame& f, const AnnotationRecord& rec,
                         const ConditionThresholds& t);

struct ImageEvaluation {
  std::string image_id;
  ConditionTags tags;
  metrics::MatchOutcome match;  // at tau = 0.5
  std::vector<Detection> dets;
  std::vector<BoundingBox> gts;
};

struct ConditionRow {
  std::string condition;
  std::size_t images = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  // Empty when the bucket holds no ground truth.
  std::optional<double> map50;
};

// Buckets overlap: an image contributes to every tag it carries, or to
// "normal" when it carries none. Only non-empty buckets are returned, in the
// order blurred, underexposed, overexposed, small_object, occluded, normal.
std::vector<ConditionRow> error_breakdown(
    const std::vector<ImageEvaluation>& per_image);

std::string breakdown_csv(const std::vector<ConditionRow>& rows);

}  // namespace tdm::conditions
