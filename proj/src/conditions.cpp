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
#include "tdm/conditions.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tdm/error.hpp"

namespace tdm::conditions {

void ConditionThresholds::validate() const {
  if (!(dark_mean < bright_mean)) {
    throw ValidationError("dark threshold must be below bright threshold");
  }
  if (!(small_object_area_frac > 0.0 && small_object_area_frac < 1.0)) {
    throw ValidationError("small-object area fraction must lie in (0, 1)");
  }
  if (!(occlusion_iou > 0.0 && occlusion_iou <= 1.0)) {
    throw ValidationError("occlusion IoU threshold must lie in (0, 1]");
  }
  if (!(blur_laplacian_var >= 0.0)) {
    throw ValidationError("blur threshold must be >= 0");
  }
}

Frame to_grayscale(const Frame& f) {
  if (f.channels() == 1) return f;
  const auto src = f.pixels();
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(f.width()) * f.height());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double luma = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                        0.114 * src[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>(std::lround(luma));
  }
  return Frame(f.id(), f.timestamp_ms(), f.width(), f.height(), 1,
               std::move(gray), f.source_tag());
}

double laplacian_variance(const Frame& gray) {
  if (gray.channels() != 1) {
    throw ValidationError("laplacian_variance expects a grayscale frame");
  }
  if (gray.width() < 3 || gray.height() < 3) {
    throw ValidationError("laplacian_variance needs an image of at least 3x3");
  }
  std::vector<double> responses;
  responses.reserve(static_cast<std::size_t>(gray.width() - 2) * (gray.height() - 2));
  for (int y = 1; y + 1 < gray.height(); ++y) {
    for (int x = 1; x + 1 < gray.width(); ++x) {
      const int r = gray.at(x, y - 1) + gray.at(x, y + 1) + gray.at(x - 1, y) +
                    gray.at(x + 1, y) - 4 * gray.at(x, y);
      responses.push_back(r);
    }
  }
  double mean = 0.0;
  for (double r : responses) mean += r;
  mean /= static_cast<double>(responses.size());
  double var = 0.0;
  for (double r : responses) var += (r - mean) * (r - mean);
  return var / static_cast<double>(responses.size());
}

double mean_intensity(const Frame& gray) {
  const auto px = gray.pixels();
  double sum = 0.0;
  for (auto p : px) sum += p;
  return sum / static_cast<double>(px.size());
}

Exposure exposure_class(const Frame& gray, const ConditionThresholds& t) {
  const double mean = mean_intensity(gray.channels() == 1 ? gray : to_grayscale(gray));
  if (mean < t.dark_mean) return Exposure::kUnderexposed;
  if (mean > t.bright_mean) return Exposure::kOverexposed;
  return Exposure::kNormal;
}

bool small_object_flag(const std::vector<BoundingBox>& gt_boxes, int image_w,
                       int image_h, const ConditionThresholds& t) {
  if (image_w < 1 || image_h < 1) {
    throw ValidationError("small_object_flag needs a positive image area");
  }
  if (gt_boxes.empty()) return false;
  const double image_area = static_cast<double>(image_w) * image_h;
  std::size_t small = 0;
  for (const auto& b : gt_boxes) {
    if (box_area(b) / image_area < t.small_object_area_frac) ++small;
  }
  return t.small_object_rule == SmallObjectRule::kAny ? small > 0
                                                      : small == gt_boxes.size();
}

bool occlusion_flag(const std::vector<BoundingBox>& gt_boxes,
                    const ConditionThresholds& t) {
  for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < gt_boxes.size(); ++j) {
      if (metrics::iou(gt_boxes[i], gt_boxes[j]) > t.occlusion_iou) return true;
    }
  }
  return false;
}

ConditionTags categorize(const Frame& f, const AnnotationRecord& rec,
                         const ConditionThresholds& t) {
  if (f.width() != rec.width || f.height() != rec.height) {
    throw ValidationError("image " + rec.image_id + " is " + std::to_string(f.width()) +
                          "x" + std::to_string(f.height()) + " but the manifest says " +
                          std::to_string(rec.width) + "x" + std::to_string(rec.height));
  }
  const Frame gray = to_grayscale(f);
  std::vector<BoundingBox> boxes;
  boxes.reserve(rec.gt_boxes.size());
  for (const auto& b : rec.gt_boxes) boxes.push_back(clamp_box(b, rec.width, rec.height));

  ConditionTags tags;
  tags.blurred = laplacian_variance(gray) < t.blur_laplacian_var;
  const Exposure e = exposure_class(gray, t);
  tags.underexposed = e == Exposure::kUnderexposed;
  tags.overexposed = e == Exposure::kOverexposed;
  tags.small_object = small_object_flag(boxes, rec.width, rec.height, t);
  tags.occluded = occlusion_flag(boxes, t);
  return tags;
}

std::vector<ConditionRow> error_breakdown(
    const std::vector<ImageEvaluation>& per_image) {
  const char* kBuckets[] = {"blurred",  "underexposed", "overexposed",
                            "small_object", "occluded", "normal"};
  std::vector<std::vector<std::size_t>> members(std::size(kBuckets));
  for (std::size_t i = 0; i < per_image.size(); ++i) {
    const ConditionTags& t = per_image[i].tags;
    const bool flags[] = {t.blurred, t.underexposed, t.overexposed,
                          t.small_object, t.occluded, t.normal()};
    for (std::size_t b = 0; b < std::size(kBuckets); ++b) {
      if (flags[b]) members[b].push_back(i);
    }
  }

  std::vector<ConditionRow> rows;
  for (std::size_t b = 0; b < std::size(kBuckets); ++b) {
    if (members[b].empty()) continue;
    ConditionRow row;
    row.condition = kBuckets[b];
    row.images = members[b].size();
    metrics::ImageDetections dets;
    metrics::ImageBoxes gts;
    std::size_t gt_count = 0;
    for (std::size_t i : members[b]) {
      const auto& img = per_image[i];
      row.tp += img.match.tp;
      row.fp += img.match.fp;
      row.fn += img.match.fn;
      // Position keeps keys unique even if image ids repeat.
      const std::string key = std::to_string(i) + ":" + img.image_id;
      dets[key] = img.dets;
      gts[key] = img.gts;
      gt_count += img.gts.size();
    }
    const auto scores = metrics::prf1(row.tp, row.fp, row.fn);
    row.precision = scores.precision;
    row.recall = scores.recall;
    if (gt_count > 0) row.map50 = metrics::average_precision(dets, gts, 0.5);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string breakdown_csv(const std::vector<ConditionRow>& rows) {
  std::ostringstream os;
  os << "condition,images,tp,fp,fn,precision,recall,map50\n";
  char buf[64];
  for (const auto& r : rows) {
    os << r.condition << ',' << r.images << ',' << r.tp << ',' << r.fp << ','
       << r.fn << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,", r.precision, r.recall);
    os << buf;
    if (r.map50) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.map50);
      os << buf;
    } else {
      os << "nan";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tdm::conditions
